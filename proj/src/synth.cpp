#include "eegbci/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "eegbci/fft.hpp"
#include "eegbci/random.hpp"

namespace eegbci {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::size_t samples(double seconds, double rate) { return static_cast<std::size_t>(std::llround(seconds * rate)); }

std::vector<std::size_t> occipital_rows(const ChannelLayout& layout) {
  std::vector<std::size_t> rows;
  for (const char* name : {"O1", "O2", "P3", "P4"})
    if (auto i = layout.find(name)) rows.push_back(*i);
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "layout has no occipital channels");
  return rows;
}

std::uint64_t stream_id(Task task, int session) {
  return static_cast<std::uint64_t>(session) * 8 + static_cast<std::uint64_t>(task);
}

}  // namespace

void SynthConfig::validate() const {
  if (!(rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "synth rate_hz must be positive");
  if (!(snr > 0.0)) throw Error(ErrorCode::InvalidArgument, "synth snr must be positive");
  if (layout.count() == 0) throw Error(ErrorCode::InvalidArgument, "synth layout is empty");
  if (harmonic_gain_10hz < 0.0 || harmonic_gain_15hz < 0.0)
    throw Error(ErrorCode::InvalidArgument, "harmonic gains must be >= 0");
  if (!(lateral_ratio > 0.0)) throw Error(ErrorCode::InvalidArgument, "lateral_ratio must be positive");
  if (alpha_snr < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha_snr must be >= 0");
  if (sessions < 1 || trials_per_session < 1 || last_session_laryngeal_imagery_trials < 1)
    throw Error(ErrorCode::InvalidArgument, "session and trial counts must be >= 1");
  if (head_s < 0.0 || prompt_s < 0.0 || gap_s < 0.0 || tail_s < 0.0 || !(stimulus_s > 0.0))
    throw Error(ErrorCode::InvalidArgument, "synth timing must be non-negative");
  if (wifi_wavelets) layout.index_of(wavelet_channel);
  if (noisy_channel) layout.index_of(noisy_channel_name);
}

Recording gen_background(const SynthConfig& config, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "background needs at least two samples");
  const std::size_t n_fft = next_pow2(n_samples);
  const FftPlan plan(n_fft);
  const auto n_ch = config.layout.count();

  Matrix data(static_cast<Eigen::Index>(n_ch), static_cast<Eigen::Index>(n_samples));
  std::vector<std::complex<double>> buf(n_fft), spec(n_fft);
  for (std::size_t ch = 0; ch < n_ch; ++ch) {
    Rng rng(derive_seed(seed, "pink", ch));
    for (auto& v : buf) v = {rng.normal(), 0.0};
    plan.forward(buf, spec);
    spec[0] = 0.0;
    for (std::size_t k = 1; k < n_fft; ++k) spec[k] /= std::sqrt(static_cast<double>(std::min(k, n_fft - k)));
    plan.inverse(spec, buf);

    double mean = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) mean += buf[i].real();
    mean /= static_cast<double>(n_samples);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) ss += (buf[i].real() - mean) * (buf[i].real() - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n_samples));
    for (std::size_t i = 0; i < n_samples; ++i)
      data(static_cast<Eigen::Index>(ch), static_cast<Eigen::Index>(i)) = (buf[i].real() - mean) / sd;
  }
  return Recording(std::move(data), config.rate_hz, config.layout,
                   {{"generator", "eegbci-synth"}, {"seed", std::to_string(seed)}});
}

void inject_ssvep(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config, double target_hz,
                  double harmonic_gain, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "ssvep"));
  const double phase1 = kTwoPi * rng.uniform();
  const double phase2 = kTwoPi * rng.uniform();
  const double a1 = std::sqrt(2.0 * config.snr / (1.0 + harmonic_gain));
  const double a2 = std::sqrt(2.0 * harmonic_gain * config.snr / (1.0 + harmonic_gain));
  for (std::size_t row : occipital_rows(config.layout)) {
    auto r = data.row(static_cast<Eigen::Index>(row));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / config.rate_hz;
      r(static_cast<Eigen::Index>(start + i)) +=
          a1 * std::sin(kTwoPi * target_hz * t + phase1) + a2 * std::sin(kTwoPi * 2.0 * target_hz * t + phase2);
    }
  }
}

Epoch gen_ssvep_trial(const SynthConfig& config, double target_hz, double harmonic_gain, std::uint64_t seed) {
  const std::size_t n = samples(config.stimulus_s, config.rate_hz);
  Matrix data = gen_background(config, n, derive_seed(seed, "background")).data();
  inject_ssvep(data, 0, n, config, target_hz, harmonic_gain, seed);
  Epoch e;
  e.data = std::move(data);
  e.label = target_hz == 10.0 ? Label::Yes : Label::No;
  e.task = Task::Ssvep;
  return e;
}

Eigen::MatrixXd lateral_mixing(const SynthConfig& config, Task task) {
  const auto n_ch = static_cast<Eigen::Index>(config.layout.count());
  if (n_ch < 2) throw Error(ErrorCode::InvalidArgument, "lateralized sources need >= 2 channels");
  Rng rng(derive_seed(config.seed, "mixing", static_cast<std::uint64_t>(task)));
  Eigen::MatrixXd m(n_ch, 2);
  for (Eigen::Index j = 0; j < 2; ++j)
    for (Eigen::Index i = 0; i < n_ch; ++i) m(i, j) = rng.normal();
  m.col(0).normalize();
  m.col(1) -= m.col(0).dot(m.col(1)) * m.col(0);
  m.col(1).normalize();
  return m;
}

void inject_lateralized(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config,
                        const Eigen::MatrixXd& mixing, Label label, std::uint64_t seed) {
  const double r = config.lateral_ratio;
  const double v = config.snr * static_cast<double>(config.layout.count()) / (1.0 + r);
  const double s_dom = std::sqrt(r * v), s_weak = std::sqrt(v);
  const double sd1 = label == Label::Yes ? s_dom : s_weak;
  const double sd2 = label == Label::Yes ? s_weak : s_dom;
  Rng rng(derive_seed(seed, "lateralized"));
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = sd1 * rng.normal();
    const double u2 = sd2 * rng.normal();
    data.col(static_cast<Eigen::Index>(start + i)) += mixing.col(0) * u1 + mixing.col(1) * u2;
  }
}

Epoch gen_lateralized_trial(const SynthConfig& config, Task task, Label label, std::uint64_t seed) {
  const std::size_t n = samples(config.stimulus_s, config.rate_hz);
  Matrix data = gen_background(config, n, derive_seed(seed, "background")).data();
  inject_lateralized(data, 0, n, config, lateral_mixing(config, task), label, seed);
  Epoch e;
  e.data = std::move(data);
  e.label = label;
  e.task = task;
  return e;
}

void inject_alpha(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "alpha"));
  const double phase = kTwoPi * rng.uniform();
  const double a = std::sqrt(2.0 * config.alpha_snr);
  for (std::size_t row : occipital_rows(config.layout)) {
    auto r = data.row(static_cast<Eigen::Index>(row));
    for (std::size_t i = 0; i < n; ++i)
      r(static_cast<Eigen::Index>(start + i)) +=
          a * std::sin(kTwoPi * 10.0 * static_cast<double>(i) / config.rate_hz + phase);
  }
}

Recording gen_artifacts(const Recording& rec, const SynthConfig& config, std::uint64_t seed) {
  if (!config.wifi_wavelets && !config.noisy_channel && !config.head_spike) return rec;
  Matrix data = rec.data();
  const double rate = rec.rate_hz();
  const auto n = static_cast<std::size_t>(data.cols());
  Rng rng(derive_seed(seed, "artifacts"));

  if (config.wifi_wavelets) {
    // Gaussian-windowed 25 Hz bursts, one per second.
    const auto row = static_cast<Eigen::Index>(rec.layout().index_of(config.wavelet_channel));
    const double sigma = 0.02, fc = 25.0;
    const auto half = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma * rate));
    const auto period = samples(1.0, rate);
    for (auto c = static_cast<std::size_t>(rng.below(period)); c < n; c += period) {
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(c) + k;
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) continue;
        const double t = static_cast<double>(k) / rate;
        data(row, i) += config.wavelet_amplitude * std::exp(-t * t / (2.0 * sigma * sigma)) * std::cos(kTwoPi * fc * t);
      }
    }
  }
  if (config.noisy_channel) {
    const auto row = static_cast<Eigen::Index>(rec.layout().index_of(config.noisy_channel_name));
    const double sd = std::sqrt(config.noisy_variance);
    for (std::size_t i = 0; i < n; ++i) data(row, static_cast<Eigen::Index>(i)) += sd * rng.normal();
  }
  if (config.head_spike) {
    // Settling transient inside the region that preprocessing trims.
    const auto onset = std::min(n, samples(0.25 * config.head_s, rate));
    const auto end = std::min(n, samples(config.head_s, rate));
    for (std::size_t i = onset; i < end; ++i) {
      const double t = static_cast<double>(i - onset) / rate;
      data.col(static_cast<Eigen::Index>(i)).array() += 50.0 * std::exp(-t / 0.2);
    }
  }
  return rec.with_data(std::move(data));
}

int trials_in_session(const SynthConfig& config, Task task, int session) {
  if (task == Task::LaryngealImagery && session == config.sessions - 1)
    return config.last_session_laryngeal_imagery_trials;
  return config.trials_per_session;
}

SessionData gen_session(const SynthConfig& config, Task task, int session) {
  config.validate();
  if (session < 0 || session >= config.sessions) throw Error(ErrorCode::OutOfRange, "session index out of range");
  const int n_trials = trials_in_session(config, task, session);
  const std::uint64_t id = stream_id(task, session);
  const double rate = config.rate_hz;

  std::vector<Label> labels;
  for (int i = 0; i < n_trials; ++i) labels.push_back(2 * i < n_trials ? Label::Yes : Label::No);
  Rng(derive_seed(config.seed, "labels", id)).shuffle(labels);

  const double trial_s = config.prompt_s + config.stimulus_s + config.gap_s;
  const std::size_t total = samples(config.head_s + n_trials * trial_s + config.tail_s, rate);
  const std::size_t stim_n = samples(config.stimulus_s, rate);
  const Eigen::MatrixXd mixing =
      task == Task::Ssvep || task == Task::EyesOpenClosed ? Eigen::MatrixXd() : lateral_mixing(config, task);

  Matrix data = gen_background(config, total, derive_seed(config.seed, "background", id)).data();
  SessionData out{session, task, Recording(Matrix::Zero(config.layout.count(), 1), rate, config.layout), {}};
  for (int i = 0; i < n_trials; ++i) {
    const double t0 = config.head_s + i * trial_s;
    const auto prompt = static_cast<std::int64_t>(samples(t0, rate));
    const auto key = static_cast<std::int64_t>(samples(t0 + 0.8 * config.prompt_s, rate));
    const auto start = static_cast<std::int64_t>(samples(t0 + config.prompt_s, rate));
    const auto end = start + static_cast<std::int64_t>(stim_n);
    for (auto [t, phase] : {std::pair{prompt, Phase::PromptShown}, std::pair{key, Phase::ResponseKey},
                            std::pair{start, Phase::StimulusStart}, std::pair{end, Phase::StimulusEnd}})
      out.markers.markers.push_back({t, task, i, labels[i], phase});

    const std::uint64_t trial_seed = derive_seed(config.seed, "trial", id * 1000 + static_cast<std::uint64_t>(i));
    const auto s = static_cast<std::size_t>(start);
    switch (task) {
      case Task::EyesOpenClosed:
        if (labels[i] == Label::Yes) inject_alpha(data, s, stim_n, config, trial_seed);
        break;
      case Task::Ssvep:
        if (labels[i] == Label::Yes)
          inject_ssvep(data, s, stim_n, config, 10.0, config.harmonic_gain_10hz, trial_seed);
        else
          inject_ssvep(data, s, stim_n, config, 15.0, config.harmonic_gain_15hz, trial_seed);
        break;
      default:
        inject_lateralized(data, s, stim_n, config, mixing, labels[i], trial_seed);
        break;
    }
  }

  Recording rec(std::move(data), rate, config.layout,
                {{"generator", "eegbci-synth"},
                 {"seed", std::to_string(config.seed)},
                 {"session", std::to_string(session)},
                 {"task", std::string(to_string(task))}});
  out.recording = gen_artifacts(rec, config, derive_seed(config.seed, "artifacts", id));
  return out;
}

}  // namespace eegbci
