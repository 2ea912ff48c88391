#include "eegbci/csp.hpp"

#include <Eigen/Dense>
#include <json.hpp>
#include <numeric>
#include <ostream>

namespace eegbci {

Eigen::MatrixXd epoch_covariance(const Epoch& epoch) {
  return kernels::detail::normalized_covariance(epoch.data);
}

namespace {

Eigen::MatrixXd shrink(const Eigen::MatrixXd& c, double s) {
  const auto n = c.rows();
  Eigen::MatrixXd out = (1.0 - s) * c;
  out.diagonal().array() += s * c.trace() / static_cast<double>(n);
  return out;
}

void require_positive_definite(const Eigen::MatrixXd& c, Label label) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  const double floor = 1e-12 * std::max(c.trace(), 1e-300);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > floor))
    throw Error(ErrorCode::NotPositiveDefinite,
                "class " + std::string(to_string(label)) +
                    " covariance is not positive definite after shrinkage");
}

}  // namespace

CspModel fit_csp_from_covariances(std::span<const Eigen::MatrixXd> covariances,
                                  std::span<const Label> labels, std::span<const int> group_ids,
                                  const ChannelLayout& layout, const CspParams& params) {
  const auto n_ch = static_cast<Eigen::Index>(layout.count());
  if (covariances.size() != labels.size() || labels.size() != group_ids.size())
    throw Error(ErrorCode::InvalidArgument, "one label and group id per covariance required");
  if (params.n_components < 2 || params.n_components % 2 != 0 || params.n_components > n_ch)
    throw Error(ErrorCode::InvalidArgument,
                "n_components must be even, >= 2 and <= channel count");
  if (!(params.shrinkage >= 0.0 && params.shrinkage <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "shrinkage must lie in [0, 1]");

  const std::array<Label, 2> classes{params.first_class, opposite(params.first_class)};
  Eigen::MatrixXd cov[2] = {Eigen::MatrixXd::Zero(n_ch, n_ch), Eigen::MatrixXd::Zero(n_ch, n_ch)};
  int count[2] = {0, 0};
  for (std::size_t i = 0; i < covariances.size(); ++i) {
    if (covariances[i].rows() != n_ch || covariances[i].cols() != n_ch)
      throw Error(ErrorCode::LayoutMismatch, "epoch covariance does not match the layout");
    const int k = labels[i] == classes[0] ? 0 : 1;
    cov[k] += covariances[i];
    ++count[k];
  }
  if (count[0] == 0 || count[1] == 0)
    throw Error(ErrorCode::SingleClass, "CSP needs epochs of both classes");
  for (int k = 0; k < 2; ++k) {
    cov[k] = shrink(cov[k] / count[k], params.shrinkage);
    require_positive_definite(cov[k], classes[k]);
  }

  const Eigen::MatrixXd composite = cov[0] + cov[1];
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(cov[0], composite);
  if (ges.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "generalized eigendecomposition failed");

  // Eigen returns ascending eigenvalues with v^T B v == 1.
  Eigen::MatrixXd full_filters(n_ch, n_ch);
  Eigen::VectorXd full_values(n_ch);
  for (Eigen::Index i = 0; i < n_ch; ++i) {
    full_filters.row(i) = ges.eigenvectors().col(n_ch - 1 - i).transpose();
    full_values(i) = ges.eigenvalues()(n_ch - 1 - i);
  }
  const Eigen::MatrixXd full_patterns = full_filters.completeOrthogonalDecomposition().pseudoInverse();

  const int half = params.n_components / 2;
  std::vector<Eigen::Index> kept;
  for (int i = 0; i < half; ++i) kept.push_back(i);
  for (int i = half; i > 0; --i) kept.push_back(n_ch - i);

  CspModel m;
  m.filters.resize(params.n_components, n_ch);
  m.patterns.resize(n_ch, params.n_components);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    Eigen::VectorXd w = full_filters.row(kept[j]).transpose();
    Eigen::VectorXd a = full_patterns.col(kept[j]);
    Eigen::Index arg = 0;
    w.cwiseAbs().maxCoeff(&arg);
    if (w(arg) < 0.0) {
      w = -w;
      a = -a;
    }
    m.filters.row(static_cast<Eigen::Index>(j)) = w.transpose();
    m.patterns.col(static_cast<Eigen::Index>(j)) = a;
    m.eigenvalues.push_back(full_values(kept[j]));
  }
  m.class_labels = classes;
  m.shrinkage = params.shrinkage;
  m.class_covariances[0] = cov[0];
  m.class_covariances[1] = cov[1];
  m.layout = layout;
  m.fit_groups.insert(group_ids.begin(), group_ids.end());
  return m;
}

CspModel fit_csp(std::span<const Epoch* const> train, const ChannelLayout& layout,
                 const CspParams& params) {
  const auto covs = kernels::normalized_covariances(train);
  std::vector<Label> labels;
  std::vector<int> groups;
  for (const Epoch* e : train) {
    if (static_cast<std::size_t>(e->data.rows()) != layout.count())
      throw Error(ErrorCode::LayoutMismatch, "epoch rows do not match the channel layout");
    labels.push_back(e->label);
    groups.push_back(e->group_id);
  }
  return fit_csp_from_covariances(covs, labels, groups, layout, params);
}

CspModel fit_csp(const EpochSet& train, const CspParams& params) {
  std::vector<const Epoch*> ptrs;
  for (const auto& e : train.epochs) ptrs.push_back(&e);
  return fit_csp(ptrs, train.layout, params);
}

std::vector<double> apply_csp(const CspModel& model, const Epoch& epoch, const ChannelLayout& layout) {
  const Epoch* p = &epoch;
  const Eigen::MatrixXd f = apply_csp(model, std::span<const Epoch* const>(&p, 1), layout, kernels::Exec::Serial);
  return {f.data(), f.data() + f.size()};
}

Eigen::MatrixXd apply_csp(const CspModel& model, std::span<const Epoch* const> epochs,
                          const ChannelLayout& layout, kernels::Exec exec) {
  if (!(layout == model.layout))
    throw Error(ErrorCode::LayoutMismatch, "epoch layout differs from the CSP fit layout");
  for (const Epoch* e : epochs)
    if (e->data.rows() != model.filters.cols())
      throw Error(ErrorCode::LayoutMismatch, "epoch channel count differs from the CSP fit");
  return kernels::log_variance_features(model.filters, epochs, exec);
}

const Eigen::MatrixXd& csp_patterns(const CspModel& model) { return model.patterns; }

namespace {

nlohmann::json rows_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd rows_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto cols = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::Format, "ragged matrix in CSP document");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

}  // namespace

std::string csp_model_to_json(const CspModel& model) {
  nlohmann::json j;
  j["format"] = "eegbci-csp";
  j["version"] = 1;
  j["layout"] = model.layout.names();
  j["class_labels"] = {std::string(to_string(model.class_labels[0])), std::string(to_string(model.class_labels[1]))};
  j["shrinkage"] = model.shrinkage;
  j["eigenvalues"] = model.eigenvalues;
  j["filters"] = rows_to_json(model.filters);
  j["patterns"] = rows_to_json(model.patterns);
  j["fit_groups"] = std::vector<int>(model.fit_groups.begin(), model.fit_groups.end());
  return j.dump();
}

CspModel csp_model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "eegbci-csp" || j.at("version") != 1)
      throw Error(ErrorCode::Format, "not a version 1 CSP document");
    CspModel m;
    m.layout = ChannelLayout(j.at("layout").get<std::vector<std::string>>());
    m.class_labels = {parse_label(j.at("class_labels").at(0).get<std::string>()),
                      parse_label(j.at("class_labels").at(1).get<std::string>())};
    m.shrinkage = j.at("shrinkage").get<double>();
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    m.filters = rows_from_json(j.at("filters"));
    m.patterns = rows_from_json(j.at("patterns"));
    const auto groups = j.at("fit_groups").get<std::vector<int>>();
    m.fit_groups = {groups.begin(), groups.end()};
    if (static_cast<std::size_t>(m.filters.cols()) != m.layout.count())
      throw Error(ErrorCode::Format, "CSP filter width does not match its layout");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("malformed CSP document: ") + e.what());
  }
}

void write_csp_matrix_csv(const CspModel& model, bool patterns, std::ostream& out) {
  const Eigen::MatrixXd m = patterns ? model.patterns : Eigen::MatrixXd(model.filters.transpose());
  out << "channel";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ",csp" << j;
  out << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << model.layout.name(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << m(i, j);
    out << '\n';
  }
}

}  // namespace eegbci
