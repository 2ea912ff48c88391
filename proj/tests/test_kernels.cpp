#include <doctest.h>

#include "eegbci/csp.hpp"
#include "eegbci/kernels.hpp"
#include "eegbci/spectral.hpp"
#include "support.hpp"

using namespace eegbci;
namespace k = eegbci::kernels;

namespace {

std::vector<Epoch> random_epochs(int n) {
  std::vector<Epoch> out;
  for (int i = 0; i < n; ++i) {
    Epoch e;
    e.data = testing::gaussian_matrix(16, 1500, 100 + i);
    e.data.row(i % 16) *= 3.0;
    e.label = i % 2 ? Label::No : Label::Yes;
    e.group_id = i;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("filtfilt rows") {
  const Matrix x = testing::gaussian_matrix(16, 5000, 1);
  const auto spec = FilterSpec::bandpass(5.0, 50.0);
  const auto sos = spec.design(1000.0);
  const Matrix s = k::serial::filtfilt_rows(x, sos, spec.pad_length());
  CHECK(k::parallel::filtfilt_rows(x, sos, spec.pad_length()) == s);
  const auto row3 = sos_filtfilt(sos, std::span<const double>(x.row(3).data(), 5000), spec.pad_length());
  for (int i = 0; i < 5000; ++i) CHECK(s(3, i) == row3[i]);
}

TEST_CASE("standardize rows") {
  const Matrix x = testing::gaussian_matrix(16, 3000, 2);
  CHECK(k::parallel::standardize_rows(x) == k::serial::standardize_rows(x));
}

TEST_CASE("windowed power") {
  const Matrix x = testing::gaussian_matrix(16, 5000, 3);
  k::PowerLayout pl{2000, 1000, 4, 1001};
  const FftPlan plan(2000);
  const auto taper = hann_window(2000);
  std::vector<std::size_t> rows{0, 6, 7, 15};
  std::vector<double> a(rows.size() * 4 * 1001), b(a.size());
  k::serial::windowed_power(x, rows, taper, pl, plan, a);
  k::parallel::windowed_power(x, rows, taper, pl, plan, b);
  CHECK(a == b);
}

TEST_CASE("normalized covariances and log variance") {
  const auto epochs = random_epochs(24);
  std::vector<const Epoch*> p;
  for (const auto& e : epochs) p.push_back(&e);
  const auto cs = k::serial::normalized_covariances(p);
  const auto cp = k::parallel::normalized_covariances(p);
  REQUIRE(cs.size() == cp.size());
  for (std::size_t i = 0; i < cs.size(); ++i) CHECK(cs[i] == cp[i]);

  const Eigen::MatrixXd filters = testing::gaussian_matrix(4, 16, 7).cast<double>();
  const Eigen::MatrixXd fs = k::serial::log_variance_features(filters, p);
  CHECK(k::parallel::log_variance_features(filters, p) == fs);
  // log(var_i / sum var) of each row sums exp to one.
  for (int i = 0; i < fs.rows(); ++i) CHECK(fs.row(i).array().exp().sum() == doctest::Approx(1.0));
}

TEST_CASE("results do not depend on the dispatcher") {
  const auto epochs = random_epochs(10);
  EpochSet set{epochs, 1000.0, ChannelLayout::standard16(), Task::MotorActivity};
  const CspModel m = fit_csp(set);
  std::vector<const Epoch*> p;
  for (const auto& e : set.epochs) p.push_back(&e);
  CHECK(apply_csp(m, p, set.layout, k::Exec::Serial) == apply_csp(m, p, set.layout, k::Exec::Parallel));
  const auto sa = spectrogram(set.epochs[0], 1000.0, set.layout, set.layout.names(), {500, 250, 5.0, 50.0},
                              k::Exec::Serial);
  const auto sb = spectrogram(set.epochs[0], 1000.0, set.layout, set.layout.names(), {500, 250, 5.0, 50.0},
                              k::Exec::Parallel);
  CHECK(sa.values == sb.values);
}

}
