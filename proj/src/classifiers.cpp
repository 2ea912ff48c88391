#include "eegbci/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

#include "eegbci/random.hpp"

namespace eegbci {

using nlohmann::json;

std::string_view to_string(Family family) {
  switch (family) {
    case Family::LogRegL2: return "LogRegL2";
    case Family::LinearSvm: return "LinearSvm";
    case Family::Knn: return "Knn";
    case Family::Qda: return "Qda";
    case Family::DecisionTree: return "DecisionTree";
  }
  return "?";
}

std::string_view display_name(Family family) {
  switch (family) {
    case Family::LogRegL2: return "Logistic regression with L2 regularization";
    case Family::LinearSvm: return "Linear SVM";
    case Family::Knn: return "k-nearest neighbors";
    case Family::Qda: return "Quadratic discriminant analysis";
    case Family::DecisionTree: return "Decision tree";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  for (Family f : kAllFamilies)
    if (text == to_string(f)) return f;
  throw Error(ErrorCode::InvalidArgument, "unknown model family '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// FeatureMatrix

void FeatureMatrix::validate() const {
  if (labels.size() != n_rows() || group_ids.size() != n_rows())
    throw Error(ErrorCode::InvalidArgument, "feature matrix fields have unequal row counts");
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinite, "feature matrix contains non-finite values");
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
  FeatureMatrix out;
  out.rows.resize(static_cast<Eigen::Index>(idx.size()), rows.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.rows.row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(idx[i]));
    out.labels.push_back(labels[idx[i]]);
    out.group_ids.push_back(group_ids[idx[i]]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_groups(std::span<const int> groups) const {
  const std::set<int> wanted(groups.begin(), groups.end());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n_rows(); ++i)
    if (wanted.count(group_ids[i])) idx.push_back(i);
  return select_rows(idx);
}

void FeatureMatrix::append(const FeatureMatrix& other) {
  if (n_rows() == 0) {
    *this = other;
    return;
  }
  if (other.n_rows() == 0) return;
  if (other.rows.cols() != rows.cols())
    throw Error(ErrorCode::WidthMismatch, "cannot append feature rows of different width");
  Eigen::MatrixXd joined(rows.rows() + other.rows.rows(), rows.cols());
  joined << rows, other.rows;
  rows = std::move(joined);
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  group_ids.insert(group_ids.end(), other.group_ids.begin(), other.group_ids.end());
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
  Standardizer s;
  const auto n = rows.rows();
  s.mean = rows.colwise().mean().transpose();
  s.scale = Eigen::VectorXd::Ones(rows.cols());
  if (n > 1) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      const double ss = (rows.col(j).array() - s.mean(j)).square().sum();
      const double sd = std::sqrt(ss / static_cast<double>(n - 1));
      if (sd > 0.0) s.scale(j) = sd;
    }
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& rows) const {
  return (rows.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

// ---------------------------------------------------------------------------
// Logistic regression

namespace detail {

namespace {
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}
}  // namespace

double logreg_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                        double b, double lambda, Eigen::VectorXd* grad_w, double* grad_b) {
  const auto n = static_cast<double>(x.rows());
  const Eigen::VectorXd z = (x * w).array() + b;
  double loss = 0.0;
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += softplus(z(i)) - y(i) * z(i);
    residual(i) = sigmoid(z(i)) - y(i);
  }
  loss = loss / n + lambda * w.squaredNorm();
  if (grad_w) *grad_w = x.transpose() * residual / n + 2.0 * lambda * w;
  if (grad_b) *grad_b = residual.sum() / n;
  return loss;
}

LogRegFit fit_logreg(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Hyperparams& hyper) {
  LogRegFit fit;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double b = 0.0;
  Eigen::VectorXd g;
  double gb = 0.0;
  double f = logreg_objective(x, y, w, b, hyper.logreg_lambda, &g, &gb);
  fit.loss_history.push_back(f);
  double step = 1.0;

  int it = 0;
  for (; it < hyper.logreg_max_iter; ++it) {
    const double g2 = g.squaredNorm() + gb * gb;
    if (std::sqrt(g2) < hyper.logreg_tol) break;

    double t = std::min(2.0 * step, 1e6);
    Eigen::VectorXd w_new, g_new;
    double b_new = 0.0, gb_new = 0.0, f_new = 0.0;
    bool accepted = false;
    while (t > 1e-20) {
      w_new = w - t * g;
      b_new = b - t * gb;
      f_new = logreg_objective(x, y, w_new, b_new, hyper.logreg_lambda, &g_new, &gb_new);
      if (f_new <= f - 0.5 * t * g2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no representable descent step left
    w = std::move(w_new);
    b = b_new;
    g = std::move(g_new);
    gb = gb_new;
    f = f_new;
    step = t;
    fit.loss_history.push_back(f);
  }
  fit.iterations = it;
  fit.grad_norm = std::sqrt(g.squaredNorm() + gb * gb);
  fit.model.weights = std::move(w);
  fit.model.bias = b;
  return fit;
}

}  // namespace detail

namespace {

Eigen::VectorXd binary_targets(const std::vector<Label>& labels, double yes, double no) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels[i] == Label::Yes ? yes : no;
  return y;
}

// ---------------------------------------------------------------------------
// Linear SVM: Pegasos stochastic subgradient with a 1/(lambda t) schedule,
// bias folded in as a constant feature, averaged over the second half.

LinearModel fit_linear_svm(const Eigen::MatrixXd& x, const std::vector<Label>& labels,
                           const Hyperparams& hyper, std::uint64_t seed) {
  if (!(hyper.svm_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "SVM C must be positive");
  if (hyper.svm_epochs < 1) throw Error(ErrorCode::InvalidArgument, "SVM needs at least one epoch");
  const auto n = x.rows();
  const auto d = x.cols();
  const Eigen::VectorXd y = binary_targets(labels, 1.0, -1.0);
  const double lambda = 1.0 / (hyper.svm_c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(d + 1);
  std::int64_t averaged = 0;
  const std::int64_t total = static_cast<std::int64_t>(hyper.svm_epochs) * n;
  std::int64_t t = 0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(seed, "linear-svm"));
  for (int epoch = 0; epoch < hyper.svm_epochs; ++epoch) {
    rng.shuffle(order);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double margin = y(i) * (x.row(i).dot(w.head(d)) + w(d));
      w *= 1.0 - 1.0 / static_cast<double>(t);
      if (margin < 1.0) {
        w.head(d) += eta * y(i) * x.row(i).transpose();
        w(d) += eta * y(i);
      }
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
      if (2 * t > total) {
        avg += w;
        ++averaged;
      }
    }
  }
  avg /= static_cast<double>(std::max<std::int64_t>(averaged, 1));
  return {avg.head(d), avg(d)};
}

// ---------------------------------------------------------------------------
// QDA

QdaClass fit_qda_class(const Eigen::MatrixXd& x, Label label, double shrinkage, double prior) {
  QdaClass c;
  c.label = label;
  const auto n = x.rows();
  const auto d = x.cols();
  c.mean = x.colwise().mean().transpose();
  c.log_prior = std::log(prior);
  const Eigen::MatrixXd centered = x.rowwise() - c.mean.transpose();
  if (n < 2) {
    c.factor = Eigen::MatrixXd::Zero(0, d);
    c.ridge = 0.0;
  } else {
    const double denom = static_cast<double>(n - 1);
    const double trace = centered.squaredNorm() / denom;
    c.ridge = shrinkage * trace / static_cast<double>(d);
    c.factor = std::sqrt((1.0 - shrinkage) / denom) * centered;
  }
  c.prepare();
  return c;
}

}  // namespace

void QdaClass::prepare() {
  const auto d = mean.size();
  const auto m = factor.rows();
  dual = ridge > 0.0 && m < d;
  if (dual) {
    Eigen::MatrixXd g = factor * factor.transpose();
    g.diagonal().array() += ridge;
    chol.compute(g);
    if (chol.info() != Eigen::Success)
      throw Error(ErrorCode::NotPositiveDefinite, "QDA class covariance factorization failed");
    const Eigen::MatrixXd l = chol.matrixL();
    log_det = static_cast<double>(d - m) * std::log(ridge) + 2.0 * l.diagonal().array().log().sum();
  } else {
    Eigen::MatrixXd s = factor.transpose() * factor;
    s.diagonal().array() += ridge;
    chol.compute(s);
    const Eigen::MatrixXd l = chol.matrixL();
    if (chol.info() != Eigen::Success || !(l.diagonal().minCoeff() > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite,
                  "QDA class covariance is singular; increase qda_shrinkage");
    log_det = 2.0 * l.diagonal().array().log().sum();
  }
}

double QdaClass::log_density(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd v = x - mean;
  double maha = 0.0;
  if (dual) {
    const Eigen::VectorXd u = factor * v;
    maha = (v.squaredNorm() - u.dot(chol.solve(u))) / ridge;
  } else {
    maha = chol.matrixL().solve(v).squaredNorm();
  }
  return log_prior - 0.5 * log_det - 0.5 * maha;
}

namespace {

// ---------------------------------------------------------------------------
// Decision tree (Gini, midpoint thresholds, first-best split wins ties)

struct TreeBuilder {
  const Eigen::MatrixXd& x;
  const std::vector<Label>& labels;
  const Hyperparams& hyper;
  TreeModel tree;

  int build(std::vector<Eigen::Index> idx, int depth) {
    const auto n = idx.size();
    std::size_t yes = 0;
    for (auto i : idx) yes += labels[static_cast<std::size_t>(i)] == Label::Yes;
    const std::size_t no = n - yes;

    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[id].score = (static_cast<double>(yes) - static_cast<double>(no)) / static_cast<double>(n);
    if (depth >= hyper.tree_max_depth || n < static_cast<std::size_t>(hyper.tree_min_samples_split) ||
        yes == 0 || no == 0)
      return id;

    const double dn = static_cast<double>(n);
    const double parent = 1.0 - (yes * yes + no * no) / (dn * dn);
    // Any split of an impure node is taken, even at zero gain (XOR needs
    // one); later candidates must beat the incumbent by more than rounding.
    double best_gain = -std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<Eigen::Index> sorted = idx;
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double va = x(a, f), vb = x(b, f);
        return va < vb || (va == vb && a < b);
      });
      std::size_t left_yes = 0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        left_yes += labels[static_cast<std::size_t>(sorted[j])] == Label::Yes;
        const double a = x(sorted[j], f), b = x(sorted[j + 1], f);
        if (a == b) continue;
        const double nl = static_cast<double>(j + 1), nr = dn - nl;
        const double ly = static_cast<double>(left_yes), ln = nl - ly;
        const double ry = static_cast<double>(yes) - ly, rn = nr - ry;
        const double gini_l = 1.0 - (ly * ly + ln * ln) / (nl * nl);
        const double gini_r = 1.0 - (ry * ry + rn * rn) / (nr * nr);
        const double gain = parent - (nl * gini_l + nr * gini_r) / dn;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          double mid = a + 0.5 * (b - a);
          if (!(mid < b)) mid = a;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (auto i : idx) (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
    tree.nodes[id].feature = best_feature;
    tree.nodes[id].threshold = best_threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  }
};

double tree_score(const TreeModel& tree, const Eigen::VectorXd& x) {
  int node = 0;
  while (tree.nodes[node].feature >= 0) {
    const auto& nd = tree.nodes[node];
    node = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
  }
  return tree.nodes[node].score;
}

double knn_score(const KnnModel& m, const Eigen::VectorXd& x) {
  const auto n = m.points.rows();
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) dist[i] = {(m.points.row(i).transpose() - x).squaredNorm(), i};
  const auto k = static_cast<std::size_t>(m.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  int margin = 0;
  for (std::size_t j = 0; j < k; ++j) margin += m.labels[static_cast<std::size_t>(dist[j].second)] == Label::Yes ? 1 : -1;
  return static_cast<double>(margin) / static_cast<double>(k);
}

}  // namespace

// ---------------------------------------------------------------------------
// train / predict

TrainedModel train(const FeatureMatrix& data, Family family, const Hyperparams& hyper, std::uint64_t seed) {
  data.validate();
  const auto n = data.n_rows();
  std::size_t yes = 0;
  for (Label l : data.labels) yes += l == Label::Yes;
  if (n == 0 || yes == 0 || yes == n)
    throw Error(ErrorCode::SingleClass, "training data must contain both labels");

  TrainedModel m;
  m.family = family;
  m.width = data.n_features();
  m.standardizer = Standardizer::fit(data.rows);
  m.fit_groups = data.groups();
  const Eigen::MatrixXd z = m.standardizer.apply(data.rows);

  switch (family) {
    case Family::LogRegL2: {
      m.params = detail::fit_logreg(z, binary_targets(data.labels, 1.0, 0.0), hyper).model;
      break;
    }
    case Family::LinearSvm: {
      m.params = fit_linear_svm(z, data.labels, hyper, seed);
      break;
    }
    case Family::Knn: {
      if (hyper.knn_k < 1 || static_cast<std::size_t>(hyper.knn_k) > n)
        throw Error(ErrorCode::InvalidArgument, "k = " + std::to_string(hyper.knn_k) +
                                                    " is invalid for " + std::to_string(n) + " samples");
      m.params = KnnModel{z, data.labels, hyper.knn_k};
      break;
    }
    case Family::Qda: {
      if (!(hyper.qda_shrinkage >= 0.0 && hyper.qda_shrinkage <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "QDA shrinkage must lie in [0, 1]");
      QdaModel q;
      const std::array<Label, 2> classes{Label::Yes, Label::No};
      for (int k = 0; k < 2; ++k) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
          if (data.labels[i] == classes[k]) idx.push_back(i);
        Eigen::MatrixXd xc(static_cast<Eigen::Index>(idx.size()), z.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) xc.row(static_cast<Eigen::Index>(i)) = z.row(static_cast<Eigen::Index>(idx[i]));
        q.classes[k] = fit_qda_class(xc, classes[k], hyper.qda_shrinkage,
                                     static_cast<double>(idx.size()) / static_cast<double>(n));
      }
      m.params = std::move(q);
      break;
    }
    case Family::DecisionTree: {
      if (hyper.tree_max_depth < 0) throw Error(ErrorCode::InvalidArgument, "tree depth must be >= 0");
      TreeBuilder b{z, data.labels, hyper, {}};
      std::vector<Eigen::Index> idx(n);
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      b.build(std::move(idx), 0);
      m.params = std::move(b.tree);
      break;
    }
  }
  return m;
}

Eigen::VectorXd decision_function(const TrainedModel& model, const Eigen::MatrixXd& rows) {
  if (static_cast<std::size_t>(rows.cols()) != model.width)
    throw Error(ErrorCode::WidthMismatch, "model expects " + std::to_string(model.width) +
                                              " features, got " + std::to_string(rows.cols()));
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinite, "query rows contain non-finite values");
  const Eigen::MatrixXd z = model.standardizer.apply(rows);
  Eigen::VectorXd out(z.rows());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
          const Eigen::VectorXd x = z.row(i).transpose();
          if constexpr (std::is_same_v<T, LinearModel>) {
            out(i) = x.dot(p.weights) + p.bias;
          } else if constexpr (std::is_same_v<T, KnnModel>) {
            out(i) = knn_score(p, x);
          } else if constexpr (std::is_same_v<T, QdaModel>) {
            out(i) = p.classes[0].log_density(x) - p.classes[1].log_density(x);
          } else {
            out(i) = tree_score(p, x);
          }
        }
      },
      model.params);
  return out;
}

std::vector<Label> predict(const TrainedModel& model, const Eigen::MatrixXd& rows) {
  const Eigen::VectorXd s = decision_function(model, rows);
  std::vector<Label> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s(i) >= 0.0 ? Label::Yes : Label::No;
  return out;
}

double window_accuracy(const TrainedModel& model, const FeatureMatrix& data) {
  if (data.n_rows() == 0) throw Error(ErrorCode::EmptyTestSet, "no rows to score");
  const auto pred = predict(model, data.rows);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == data.labels[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

double group_accuracy(const TrainedModel& model, const FeatureMatrix& data) {
  if (data.n_rows() == 0) throw Error(ErrorCode::EmptyTestSet, "no rows to score");
  const auto pred = predict(model, data.rows);
  const auto votes = majority_vote(pred, data.group_ids);
  std::map<int, Label> truth;
  for (std::size_t i = 0; i < data.n_rows(); ++i) truth[data.group_ids[i]] = data.labels[i];
  std::size_t hit = 0;
  for (const auto& [g, l] : votes) hit += truth.at(g) == l;
  return static_cast<double>(hit) / static_cast<double>(votes.size());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const auto r = j.at("rows").get<Eigen::Index>();
  const auto c = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<std::size_t>(r * c) != data.size()) throw Error(ErrorCode::Format, "matrix size mismatch");
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data[static_cast<std::size_t>(i * c + k)];
  return m;
}

std::vector<std::string> labels_to_strings(const std::vector<Label>& labels) {
  std::vector<std::string> out;
  for (Label l : labels) out.emplace_back(to_string(l));
  return out;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = "eegbci-model";
  j["version"] = 1;
  j["family"] = std::string(to_string(model.family));
  j["width"] = model.width;
  j["standardizer"] = {{"mean", vec_to_json(model.standardizer.mean)},
                       {"scale", vec_to_json(model.standardizer.scale)}};
  j["fit_groups"] = std::vector<int>(model.fit_groups.begin(), model.fit_groups.end());
  json p;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          p = {{"weights", vec_to_json(m.weights)}, {"bias", m.bias}};
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          p = {{"k", m.k}, {"points", mat_to_json(m.points)}, {"labels", labels_to_strings(m.labels)}};
        } else if constexpr (std::is_same_v<T, QdaModel>) {
          p["classes"] = json::array();
          for (const auto& c : m.classes)
            p["classes"].push_back({{"label", std::string(to_string(c.label))},
                                    {"mean", vec_to_json(c.mean)},
                                    {"factor", mat_to_json(c.factor)},
                                    {"ridge", c.ridge},
                                    {"log_prior", c.log_prior}});
        } else {
          p["nodes"] = json::array();
          for (const auto& nd : m.nodes)
            p["nodes"].push_back({{"feature", nd.feature},
                                  {"threshold", nd.threshold},
                                  {"left", nd.left},
                                  {"right", nd.right},
                                  {"score", nd.score}});
        }
      },
      model.params);
  j["params"] = std::move(p);
  return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "eegbci-model") throw Error(ErrorCode::Format, "not an eegbci model document");
    if (j.at("version").get<int>() != 1)
      throw Error(ErrorCode::Format, "unsupported model version " + j.at("version").dump());
    TrainedModel m;
    m.family = parse_family(j.at("family").get<std::string>());
    m.width = j.at("width").get<std::size_t>();
    m.standardizer.mean = vec_from_json(j.at("standardizer").at("mean"));
    m.standardizer.scale = vec_from_json(j.at("standardizer").at("scale"));
    const auto groups = j.at("fit_groups").get<std::vector<int>>();
    m.fit_groups = {groups.begin(), groups.end()};
    const json& p = j.at("params");
    switch (m.family) {
      case Family::LogRegL2:
      case Family::LinearSvm:
        m.params = LinearModel{vec_from_json(p.at("weights")), p.at("bias").get<double>()};
        break;
      case Family::Knn: {
        KnnModel k;
        k.k = p.at("k").get<int>();
        k.points = mat_from_json(p.at("points"));
        for (const auto& s : p.at("labels")) k.labels.push_back(parse_label(s.get<std::string>()));
        m.params = std::move(k);
        break;
      }
      case Family::Qda: {
        QdaModel q;
        for (std::size_t c = 0; c < 2; ++c) {
          const json& jc = p.at("classes").at(c);
          q.classes[c].label = parse_label(jc.at("label").get<std::string>());
          q.classes[c].mean = vec_from_json(jc.at("mean"));
          q.classes[c].factor = mat_from_json(jc.at("factor"));
          q.classes[c].ridge = jc.at("ridge").get<double>();
          q.classes[c].log_prior = jc.at("log_prior").get<double>();
          q.classes[c].prepare();
        }
        m.params = std::move(q);
        break;
      }
      case Family::DecisionTree: {
        TreeModel t;
        for (const auto& jn : p.at("nodes"))
          t.nodes.push_back({jn.at("feature").get<int>(), jn.at("threshold").get<double>(),
                             jn.at("left").get<int>(), jn.at("right").get<int>(), jn.at("score").get<double>()});
        m.params = std::move(t);
        break;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("malformed model document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Model selection

Selection select_best(const FoldFeaturizer& featurize, const GroupFolds& folds, const Hyperparams& hyper,
                      std::uint64_t seed) {
  if (folds.size() < 2) throw Error(ErrorCode::InvalidArgument, "model selection needs >= 2 folds");

  Selection sel;
  for (std::size_t k = 0; k < folds.size(); ++k) {
    const auto fit_groups = folds.complement(k);
    const auto& score_groups = folds.folds[k];
    auto [fit, score] = featurize(fit_groups, score_groups);

    const std::set<int> fit_set(fit_groups.begin(), fit_groups.end());
    const std::set<int> score_set(score_groups.begin(), score_groups.end());
    require_disjoint(fit_set, score_groups, "cross-validation fold");
    for (int g : fit.group_ids)
      if (!fit_set.count(g)) throw Error(ErrorCode::Leakage, "fold featurizer returned a foreign fit group");
    for (int g : score.group_ids)
      if (!score_set.count(g)) throw Error(ErrorCode::Leakage, "fold featurizer returned a foreign score group");

    const auto yes = std::count(fit.labels.begin(), fit.labels.end(), Label::Yes);
    if (yes == 0 || static_cast<std::size_t>(yes) == fit.labels.size())
      throw Error(ErrorCode::DegenerateFold, "training side of fold " + std::to_string(k) + " has a single class");

    for (std::size_t f = 0; f < kAllFamilies.size(); ++f) {
      const TrainedModel m = train(fit, kAllFamilies[f], hyper, seed);
      require_disjoint(m.fit_groups, score.group_ids, "cross-validation fold");
      sel.family_cv[f] += group_accuracy(m, score);
    }
  }
  std::size_t best = 0;
  for (std::size_t f = 0; f < kAllFamilies.size(); ++f) {
    sel.family_cv[f] /= static_cast<double>(folds.size());
    if (sel.family_cv[f] > sel.family_cv[best]) best = f;
  }
  sel.family = kAllFamilies[best];
  sel.cv_accuracy = sel.family_cv[best];

  std::vector<int> all;
  for (const auto& fold : folds.folds) all.insert(all.end(), fold.begin(), fold.end());
  std::sort(all.begin(), all.end());
  auto full = featurize(all, {}).first;
  sel.model = train(full, sel.family, hyper, seed);
  return sel;
}

Selection select_best(const FeatureMatrix& data, const GroupFolds& folds, const Hyperparams& hyper,
                      std::uint64_t seed) {
  data.validate();
  return select_best(
      [&](const std::vector<int>& fit, const std::vector<int>& score) {
        return std::make_pair(data.select_groups(fit), data.select_groups(score));
      },
      folds, hyper, seed);
}

}  // namespace eegbci
