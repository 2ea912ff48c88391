// Serial reference vs OpenMP kernels on corpus-sized inputs.
//
//   ./bench_kernels --benchmark_filter=filtfilt
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <vector>

#include "eegbci/csp.hpp"
#include "eegbci/kernels.hpp"
#include "eegbci/spectral.hpp"
#include "eegbci/synth.hpp"

namespace {

using eegbci::Matrix;
using eegbci::kernels::Exec;

const Matrix& session_matrix() {
  static const Matrix m = [] {
    eegbci::SynthConfig c;
    return eegbci::gen_background(c, 72000, 1).data();
  }();
  return m;
}

const std::vector<eegbci::Epoch>& epochs() {
  static const std::vector<eegbci::Epoch> e = [] {
    eegbci::SynthConfig c;
    std::vector<eegbci::Epoch> out;
    for (int i = 0; i < 60; ++i)
      out.push_back(eegbci::gen_lateralized_trial(c, eegbci::Task::MotorActivity,
                                                  i % 2 ? eegbci::Label::No : eegbci::Label::Yes, 100 + i));
    return out;
  }();
  return e;
}

std::vector<const eegbci::Epoch*> epoch_ptrs() {
  std::vector<const eegbci::Epoch*> p;
  for (const auto& e : epochs()) p.push_back(&e);
  return p;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_filtfilt(benchmark::State& state) {
  const auto spec = eegbci::FilterSpec::bandpass(5.0, 50.0, 4);
  const auto sos = spec.design(1000.0);
  const Matrix& m = session_matrix();
  for (auto _ : state)
    benchmark::DoNotOptimize(eegbci::kernels::filtfilt_rows(m, sos, spec.pad_length(), exec_of(state)));
}

void BM_standardize(benchmark::State& state) {
  const Matrix& m = session_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(eegbci::kernels::standardize_rows(m, exec_of(state)));
}

void BM_spectrogram(benchmark::State& state) {
  const auto& e = epochs();
  const auto layout = eegbci::ChannelLayout::standard16();
  for (auto _ : state)
    for (const auto& ep : e)
      benchmark::DoNotOptimize(eegbci::spectrogram(ep, 1000.0, layout, layout.names(), {}, exec_of(state)));
}

void BM_covariances(benchmark::State& state) {
  const auto p = epoch_ptrs();
  for (auto _ : state) benchmark::DoNotOptimize(eegbci::kernels::normalized_covariances(p, exec_of(state)));
}

void BM_log_variance(benchmark::State& state) {
  const auto p = epoch_ptrs();
  const auto layout = eegbci::ChannelLayout::standard16();
  eegbci::EpochSet set{epochs(), 1000.0, layout, eegbci::Task::MotorActivity};
  const auto model = eegbci::fit_csp(set);
  for (auto _ : state)
    benchmark::DoNotOptimize(eegbci::kernels::log_variance_features(model.filters, p, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_filtfilt)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_standardize)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectrogram)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_covariances)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_variance)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
