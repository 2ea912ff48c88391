#include <doctest.h>

#include <Eigen/Dense>

#include "eegbci/corpus.hpp"
#include "eegbci/fft.hpp"
#include "eegbci/io.hpp"
#include "eegbci/markers.hpp"
#include "eegbci/synth.hpp"
#include "support.hpp"

using namespace eegbci;
using testing::error_code_of;

namespace {

SynthConfig quiet() {
  SynthConfig c;
  c.wifi_wavelets = c.noisy_channel = c.head_spike = false;
  return c;
}

double band_power(const std::vector<std::complex<double>>& spec, double rate, double lo, double hi) {
  const double df = rate / static_cast<double>(spec.size());
  double p = 0.0;
  for (std::size_t k = 1; k < spec.size() / 2; ++k) {
    const double f = k * df;
    if (f >= lo && f < hi) p += std::norm(spec[k]);
  }
  return p;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("background is unit variance per channel and reproducible") {
  const SynthConfig c;
  const Recording a = gen_background(c, 7001, 3);
  const Recording b = gen_background(c, 7001, 3);
  CHECK(a.data() == b.data());
  CHECK(a.data() != gen_background(c, 7001, 4).data());
  for (Eigen::Index r = 0; r < a.data().rows(); ++r) {
    const auto row = a.data().row(r);
    const double mean = row.mean();
    CHECK(std::abs(mean) < 1e-12);
    CHECK((row.array() - mean).square().mean() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(error_code_of([&] { gen_background(c, 1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("background has a 1/f spectrum") {
  const SynthConfig c;
  const std::size_t n = 65536;
  const Recording bg = gen_background(c, n, 8);
  const FftPlan plan(n);
  double low = 0.0, high = 0.0;
  for (Eigen::Index r = 0; r < bg.data().rows(); ++r) {
    const auto spec = plan.forward_real(std::span<const double>(bg.data().row(r).data(), n));
    low += band_power(spec, c.rate_hz, 5.0, 10.0);
    high += band_power(spec, c.rate_hz, 40.0, 80.0);
  }
  // Equal power per octave.
  CHECK(low / high == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("ssvep injection sets total power and harmonic ratio") {
  SynthConfig c;
  c.snr = 2.0;
  Matrix m = Matrix::Zero(16, 5000);
  inject_ssvep(m, 0, 5000, c, 10.0, 1.5, 1);
  const auto o1 = c.layout.index_of("O1");
  const auto row = m.row(static_cast<Eigen::Index>(o1));
  CHECK(row.squaredNorm() / 5000.0 == doctest::Approx(2.0).epsilon(1e-6));
  auto amp = [&](double f) {
    double s = 0.0, co = 0.0;
    for (int i = 0; i < 5000; ++i) {
      s += row(i) * std::sin(2 * std::numbers::pi * f * i / 1000.0);
      co += row(i) * std::cos(2 * std::numbers::pi * f * i / 1000.0);
    }
    return 2.0 * std::hypot(s, co) / 5000.0;
  };
  CHECK(std::pow(amp(20.0) / amp(10.0), 2) == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(m.row(static_cast<Eigen::Index>(c.layout.index_of("Fz"))).isZero());
}

TEST_CASE("ssvep trials are labelled by target") {
  const SynthConfig c;
  CHECK(gen_ssvep_trial(c, 10.0, 1.5, 1).label == Label::Yes);
  const Epoch e = gen_ssvep_trial(c, 15.0, 0.5, 1);
  CHECK(e.label == Label::No);
  CHECK(e.data.cols() == 5000);
}

TEST_CASE("lateral mixing is orthonormal and task specific") {
  const SynthConfig c;
  const auto m = lateral_mixing(c, Task::MotorActivity);
  CHECK((m.transpose() * m - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  const auto l = lateral_mixing(c, Task::LaryngealActivity);
  CHECK((m - l).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("lateralized sources follow the variance ratio") {
  SynthConfig c;
  const auto mix = lateral_mixing(c, Task::MotorImagery);
  Matrix yes = Matrix::Zero(16, 20000), no = Matrix::Zero(16, 20000);
  inject_lateralized(yes, 0, 20000, c, mix, Label::Yes, 1);
  inject_lateralized(no, 0, 20000, c, mix, Label::No, 1);
  auto var_along = [&](const Matrix& m, int k) {
    const Eigen::VectorXd s = mix.col(k).transpose() * m;
    return s.squaredNorm() / s.size();
  };
  CHECK(var_along(yes, 0) / var_along(yes, 1) == doctest::Approx(c.lateral_ratio).epsilon(0.1));
  CHECK(var_along(no, 1) / var_along(no, 0) == doctest::Approx(c.lateral_ratio).epsilon(0.1));
}

TEST_CASE("session timing and balanced labels") {
  SynthConfig c;
  const SessionData s = gen_session(c, Task::MotorActivity, 2);
  CHECK(s.recording.n_samples() == 73000);
  CHECK(s.recording.meta().at("task") == "MotorActivity");
  REQUIRE(s.markers.markers.size() == 40);
  int yes = 0;
  for (int i = 0; i < 10; ++i) {
    const auto* m = &s.markers.markers[4 * i];
    const std::int64_t t0 = 2000 + 7000 * i;
    CHECK(m[0].phase == Phase::PromptShown);
    CHECK(m[0].t_sample == t0);
    CHECK(m[1].phase == Phase::ResponseKey);
    CHECK(m[1].t_sample == t0 + 800);
    CHECK(m[2].phase == Phase::StimulusStart);
    CHECK(m[2].t_sample == t0 + 1000);
    CHECK(m[3].phase == Phase::StimulusEnd);
    CHECK(m[3].t_sample == t0 + 6000);
    for (int k = 0; k < 4; ++k) CHECK(m[k].trial == i);
    yes += m[0].truth == Label::Yes;
  }
  CHECK(yes == 5);
  CHECK_NOTHROW(validate_marker_log(s.markers, s.recording.n_samples()));
  CHECK(error_code_of([&] { gen_session(c, Task::Ssvep, 6); }) == ErrorCode::OutOfRange);
}

TEST_CASE("sessions are reproducible from the seed") {
  SynthConfig c;
  c.seed = 5;
  const auto a = gen_session(c, Task::Ssvep, 1);
  const auto b = gen_session(c, Task::Ssvep, 1);
  CHECK(a.recording.data() == b.recording.data());
  CHECK(a.markers == b.markers);
  c.seed = 6;
  CHECK(gen_session(c, Task::Ssvep, 1).recording.data() != a.recording.data());
}

TEST_CASE("artifacts are toggled individually") {
  const SynthConfig off = quiet();
  const Recording bg = gen_background(off, 5000, 1);
  CHECK(gen_artifacts(bg, off, 2).data() == bg.data());

  SynthConfig spike = off;
  spike.head_spike = true;
  const Matrix d = gen_artifacts(bg, spike, 2).data() - bg.data();
  CHECK(d.leftCols(500).isZero());
  CHECK(d(0, 500) == doctest::Approx(50.0));
  CHECK(d.rightCols(3000).isZero());

  SynthConfig noisy = off;
  noisy.noisy_channel = true;
  Matrix dn = gen_artifacts(bg, noisy, 2).data() - bg.data();
  const auto p4 = static_cast<Eigen::Index>(off.layout.index_of("P4"));
  CHECK(dn.row(p4).squaredNorm() / 5000.0 == doctest::Approx(9.0).epsilon(0.1));
  dn.row(p4).setZero();
  CHECK(dn.cwiseAbs().maxCoeff() == 0.0);

  SynthConfig wifi = off;
  wifi.wifi_wavelets = true;
  const Matrix dw = gen_artifacts(bg, wifi, 2).data() - bg.data();
  const auto cz = static_cast<Eigen::Index>(off.layout.index_of("Cz"));
  CHECK(dw.row(cz).cwiseAbs().maxCoeff() == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("config validation") {
  SynthConfig c;
  c.snr = 0.0;
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = SynthConfig{};
  c.wavelet_channel = "C3";
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = SynthConfig{};
  c.sessions = 0;
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("corpus save and load round trip") {
  SynthConfig c;
  c.sessions = 2;
  const Corpus corpus = gen_corpus(c, std::set<Task>{Task::Ssvep, Task::LaryngealImagery});
  CHECK(corpus.sessions.size() == 4);
  CHECK(corpus.tasks() == std::set<Task>{Task::Ssvep, Task::LaryngealImagery});
  CHECK(corpus.for_task(Task::LaryngealImagery).back()->markers.markers.size() == 12);

  testing::TempDir dir("corpus");
  save_corpus(corpus, dir.path);
  CHECK(std::filesystem::exists(dir.path / "corpus.json"));
  const Corpus back = load_corpus(dir.path);
  REQUIRE(back.sessions.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = corpus.sessions[i];
    const auto& b = back.sessions[i];
    CHECK(a.task == b.task);
    CHECK(a.session == b.session);
    CHECK(a.markers == b.markers);
    const double err = (a.recording.data() - b.recording.data()).cwiseAbs().maxCoeff();
    CHECK(err < 1e-4 * a.recording.data().cwiseAbs().maxCoeff());
  }
  const Corpus only = load_corpus(dir.path, std::set<Task>{Task::Ssvep});
  CHECK(only.sessions.size() == 2);
  CHECK(error_code_of([&] { load_corpus(dir.path / "missing"); }) == ErrorCode::Io);
}

}
