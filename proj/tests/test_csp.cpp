#include <doctest.h>

#include <Eigen/Dense>

#include "eegbci/csp.hpp"
#include "eegbci/synth.hpp"
#include "support.hpp"

using namespace eegbci;
using testing::error_code_of;

namespace {

EpochSet lateral_set(Task task, int n, std::uint64_t seed) {
  SynthConfig c;
  EpochSet set;
  set.rate_hz = c.rate_hz;
  set.layout = c.layout;
  set.task = task;
  for (int i = 0; i < n; ++i) {
    Epoch e = gen_lateralized_trial(c, task, i % 2 ? Label::No : Label::Yes, derive_seed(seed, "epoch", i));
    e.group_id = i;
    set.epochs.push_back(std::move(e));
  }
  return set;
}

double abs_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

const EpochSet& motor60() {
  static const EpochSet s = lateral_set(Task::MotorActivity, 60, 1);
  return s;
}

}  // namespace

TEST_SUITE("csp") {

TEST_CASE("epoch covariance is trace normalized and symmetric") {
  Epoch e;
  e.data = testing::gaussian_matrix(4, 300, 2) * 5.0;
  const auto c = epoch_covariance(e);
  CHECK(c.trace() == doctest::Approx(1.0));
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("filters solve the generalized eigenproblem and whiten the composite") {
  const CspModel m = fit_csp(motor60());
  REQUIRE(m.filters.rows() == 4);
  REQUIRE(m.filters.cols() == 16);
  const Eigen::MatrixXd comp = m.class_covariances[0] + m.class_covariances[1];
  const Eigen::MatrixXd white = m.filters * comp * m.filters.transpose();
  CHECK((white - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-6);
  for (int i = 0; i < 4; ++i) {
    const Eigen::VectorXd w = m.filters.row(i).transpose();
    const Eigen::VectorXd resid = m.class_covariances[0] * w - m.eigenvalues[i] * comp * w;
    CHECK(resid.norm() < 1e-9);
  }
  for (int i = 1; i < 4; ++i) CHECK(m.eigenvalues[i] <= m.eigenvalues[i - 1]);
  CHECK(m.eigenvalues.front() > 0.5);
  CHECK(m.eigenvalues.back() < 0.5);
}

TEST_CASE("leading filters recover the ground-truth unmixing") {
  SynthConfig c;
  const Eigen::MatrixXd mix = lateral_mixing(c, Task::MotorActivity);
  REQUIRE(mix.cols() == 2);
  CHECK((mix.transpose() * mix - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd unmix = mix.completeOrthogonalDecomposition().pseudoInverse();
  const CspModel m = fit_csp(motor60());
  CHECK(abs_cosine(m.filters.row(0).transpose(), unmix.row(0).transpose()) > 0.95);
  CHECK(abs_cosine(m.filters.row(3).transpose(), unmix.row(1).transpose()) > 0.95);
}

TEST_CASE("sign convention makes the largest filter entry positive") {
  const CspModel m = fit_csp(motor60());
  for (int i = 0; i < m.filters.rows(); ++i) {
    Eigen::Index arg = 0;
    m.filters.row(i).cwiseAbs().maxCoeff(&arg);
    CHECK(m.filters(i, arg) > 0.0);
  }
}

TEST_CASE("patterns are the matching columns of the inverse filter matrix") {
  CspParams p;
  p.n_components = 16;
  const CspModel m = fit_csp(motor60(), p);
  const Eigen::MatrixXd prod = m.filters * m.patterns;
  CHECK((prod - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(&csp_patterns(m) == &m.patterns);
}

TEST_CASE("swapping the first class mirrors the components") {
  CspParams p;
  p.first_class = Label::No;
  const CspModel a = fit_csp(motor60());
  const CspModel b = fit_csp(motor60(), p);
  CHECK(b.class_labels[0] == Label::No);
  CHECK(abs_cosine(a.filters.row(0).transpose(), b.filters.row(3).transpose()) > 0.999);
  CHECK(a.eigenvalues[0] == doctest::Approx(1.0 - b.eigenvalues[3]).epsilon(1e-9));
}

TEST_CASE("log-variance features separate the classes") {
  const CspModel m = fit_csp(motor60());
  double yes0 = 0.0, no0 = 0.0;
  for (const auto& e : motor60().epochs) {
    const auto f = apply_csp(m, e, motor60().layout);
    REQUIRE(f.size() == 4);
    (e.label == Label::Yes ? yes0 : no0) += f[0];
  }
  CHECK(yes0 > no0);
}

TEST_CASE("batch and single-epoch featurization agree") {
  const CspModel m = fit_csp(motor60());
  std::vector<const Epoch*> ptrs;
  for (const auto& e : motor60().epochs) ptrs.push_back(&e);
  const Eigen::MatrixXd batch = apply_csp(m, ptrs, motor60().layout);
  for (int i = 0; i < 5; ++i) {
    const auto one = apply_csp(m, motor60().epochs[i], motor60().layout);
    for (int j = 0; j < 4; ++j) CHECK(one[j] == batch(i, j));
  }
}

TEST_CASE("fit records its groups") {
  const CspModel m = fit_csp(motor60());
  CHECK(m.fit_groups.size() == 60);
  CHECK(m.fit_groups.count(59) == 1);
}

TEST_CASE("input errors") {
  EpochSet one = motor60();
  for (auto& e : one.epochs) e.label = Label::Yes;
  CHECK(error_code_of([&] { fit_csp(one); }) == ErrorCode::SingleClass);
  CspParams p;
  p.n_components = 3;
  CHECK(error_code_of([&] { fit_csp(motor60(), p); }) == ErrorCode::InvalidArgument);
  p.n_components = 4;
  p.shrinkage = 1.5;
  CHECK(error_code_of([&] { fit_csp(motor60(), p); }) == ErrorCode::InvalidArgument);

  const CspModel m = fit_csp(motor60());
  const ChannelLayout other({"a", "b"});
  CHECK(error_code_of([&] { apply_csp(m, motor60().epochs[0], other); }) == ErrorCode::LayoutMismatch);

  // Rank-deficient data with no shrinkage cannot be whitened.
  EpochSet flat = motor60();
  for (auto& e : flat.epochs) e.data.row(3) = e.data.row(2);
  p.shrinkage = 0.0;
  CHECK(error_code_of([&] { fit_csp(flat, p); }) == ErrorCode::NotPositiveDefinite);
}

TEST_CASE("JSON round trip preserves filters exactly") {
  const CspModel m = fit_csp(motor60());
  const std::string text = csp_model_to_json(m);
  const CspModel back = csp_model_from_json(text);
  CHECK(back.filters == m.filters);
  CHECK(back.patterns == m.patterns);
  CHECK(back.eigenvalues == m.eigenvalues);
  CHECK(back.layout == m.layout);
  CHECK(back.fit_groups == m.fit_groups);
  CHECK(csp_model_to_json(back) == text);
  CHECK(error_code_of([] { csp_model_from_json(R"({"format":"eegbci-csp","version":9})"); }) == ErrorCode::Format);
  CHECK(error_code_of([] { csp_model_from_json("nope"); }) == ErrorCode::Format);
}

TEST_CASE("filter CSV lists one row per channel") {
  const CspModel m = fit_csp(motor60());
  std::ostringstream out;
  write_csp_matrix_csv(m, false, out);
  const std::string s = out.str();
  CHECK(s.rfind("channel,csp0,csp1,csp2,csp3\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 17);
}

}
