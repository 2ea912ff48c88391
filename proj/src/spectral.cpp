#include "eegbci/spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace eegbci {

std::vector<std::string> occipital_channels() { return {"O1", "O2", "P3", "P4"}; }

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::size_t window_count(std::size_t n_samples, std::size_t window, std::size_t hop) {
  if (window == 0 || hop == 0) throw Error(ErrorCode::InvalidArgument, "window and hop must be positive");
  if (window > n_samples)
    throw Error(ErrorCode::InvalidArgument, "window of " + std::to_string(window) +
                                                " samples exceeds epoch length " +
                                                std::to_string(n_samples));
  return (n_samples - window) / hop + 1;
}

Spectrogram spectrogram(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                        const std::vector<std::string>& channels, const SpectrogramParams& params,
                        kernels::Exec exec) {
  if (static_cast<std::size_t>(epoch.data.rows()) != layout.count())
    throw Error(ErrorCode::LayoutMismatch, "epoch rows do not match the channel layout");
  const auto rows = layout.indices_of(channels);
  const std::size_t n = static_cast<std::size_t>(epoch.data.cols());

  kernels::PowerLayout pl;
  pl.window = params.window_samples;
  pl.hop = params.hop_samples;
  pl.n_windows = window_count(n, pl.window, pl.hop);
  pl.n_bins = pl.window / 2 + 1;

  const double df = rate_hz / static_cast<double>(pl.window);
  const double eps = 1e-9 * df;
  std::vector<std::size_t> keep;
  Spectrogram s;
  for (std::size_t k = 0; k < pl.n_bins; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f >= params.band_lo_hz - eps && f <= params.band_hi_hz + eps) {
      keep.push_back(k);
      s.freqs_hz.push_back(f);
    }
  }
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "spectrogram band contains no bins");

  const FftPlan plan(pl.window);
  const auto taper = hann_window(pl.window);
  std::vector<double> full(rows.size() * pl.n_windows * pl.n_bins);
  kernels::windowed_power(epoch.data, rows, taper, pl, plan, full, exec);

  s.channels = channels;
  s.window_samples = pl.window;
  s.hop_samples = pl.hop;
  s.n_windows = pl.n_windows;
  s.group_id = epoch.group_id;
  s.label = epoch.label;
  s.values.resize(rows.size() * keep.size() * pl.n_windows);
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (std::size_t b = 0; b < keep.size(); ++b)
      for (std::size_t w = 0; w < pl.n_windows; ++w)
        s.values[(c * keep.size() + b) * pl.n_windows + w] =
            full[(c * pl.n_windows + w) * pl.n_bins + keep[b]];
  return s;
}

std::vector<WindowFeatures> features_from_spectrogram(const Spectrogram& spec) {
  const std::size_t nb = spec.n_bins();
  std::vector<WindowFeatures> out(spec.n_windows);
  for (std::size_t w = 0; w < spec.n_windows; ++w) {
    auto& f = out[w];
    f.group_id = spec.group_id;
    f.values.reserve(spec.channels.size() * nb);
    for (std::size_t c = 0; c < spec.channels.size(); ++c)
      for (std::size_t b = 0; b < nb; ++b) f.values.push_back(spec.at(c, b, w));
  }
  return out;
}

std::vector<double> mean_spectrum(const Spectrogram& spec) {
  std::vector<double> m(spec.n_bins(), 0.0);
  for (std::size_t c = 0; c < spec.channels.size(); ++c)
    for (std::size_t b = 0; b < spec.n_bins(); ++b)
      for (std::size_t w = 0; w < spec.n_windows; ++w) m[b] += spec.at(c, b, w);
  const double count = static_cast<double>(spec.channels.size() * spec.n_windows);
  for (double& v : m) v /= count;
  return m;
}

void write_spectrogram_csv(const Spectrogram& spec, std::ostream& out) {
  out << "channel,freq_hz";
  for (std::size_t w = 0; w < spec.n_windows; ++w) out << ",w" << w;
  out << '\n';
  out.precision(17);
  for (std::size_t c = 0; c < spec.channels.size(); ++c) {
    for (std::size_t b = 0; b < spec.n_bins(); ++b) {
      out << spec.channels[c] << ',' << spec.freqs_hz[b];
      for (std::size_t w = 0; w < spec.n_windows; ++w) out << ',' << spec.at(c, b, w);
      out << '\n';
    }
  }
}

double alpha_score_from_ratio(double ratio, double reference_ratio) {
  if (!(ratio > 0.0)) return 0.0;
  if (ratio >= 1.0) return 1.0;
  const double a = ratio * (1.0 - reference_ratio);
  return a / (a + (1.0 - ratio) * reference_ratio);
}

double detect_alpha(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                    const std::vector<std::string>& channels, const AlphaParams& params) {
  const auto window = static_cast<std::size_t>(std::llround(2.0 * rate_hz));
  if (static_cast<std::size_t>(epoch.data.cols()) < window)
    throw Error(ErrorCode::InvalidArgument, "alpha detection needs at least 2 s of data");
  SpectrogramParams sp;
  sp.window_samples = window;
  sp.hop_samples = window / 2;
  sp.band_lo_hz = params.total_lo_hz;
  sp.band_hi_hz = params.total_hi_hz;
  const auto spec = spectrogram(epoch, rate_hz, layout, channels, sp);
  const auto m = mean_spectrum(spec);
  double alpha = 0.0, total = 0.0;
  for (std::size_t b = 0; b < m.size(); ++b) {
    total += m[b];
    if (spec.freqs_hz[b] >= params.alpha_lo_hz && spec.freqs_hz[b] <= params.alpha_hi_hz) alpha += m[b];
  }
  if (!(total > 0.0)) return 0.0;
  return alpha_score_from_ratio(alpha / total, params.reference_ratio);
}

std::vector<SsvepTarget> default_ssvep_targets() { return {{10.0, Label::Yes}, {15.0, Label::No}}; }

Label decide_ssvep(const std::vector<SsvepTarget>& targets, const std::vector<PsdScore>& scores) {
  if (targets.empty() || targets.size() != scores.size())
    throw Error(ErrorCode::InvalidArgument, "one score per SSVEP target required");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double s = scores[i].total_score, b = scores[best].total_score;
    if (s > b || (s == b && targets[i].label == Label::Yes && targets[best].label != Label::Yes)) best = i;
  }
  return targets[best].label;
}

SsvepResult ssvep_score(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                        const std::vector<SsvepTarget>& targets, int n_harmonics,
                        const std::vector<std::string>& channels, const SpectrogramParams& params) {
  if (n_harmonics < 0) throw Error(ErrorCode::InvalidArgument, "n_harmonics must be >= 0");
  const double df = rate_hz / static_cast<double>(params.window_samples);
  for (const auto& t : targets) {
    for (int h = 1; h <= n_harmonics + 1; ++h) {
      const double f = t.frequency_hz * h;
      if (f < params.band_lo_hz || f > params.band_hi_hz)
        throw Error(ErrorCode::OutOfRange, "SSVEP component at " + std::to_string(f) +
                                               " Hz lies outside the feature band");
    }
  }

  const auto spec = spectrogram(epoch, rate_hz, layout, channels, params);
  const auto m = mean_spectrum(spec);
  auto power_at = [&](double f) {
    const double pos = (f - spec.freqs_hz.front()) / df;
    const auto bin = static_cast<std::size_t>(std::llround(pos));
    if (bin >= m.size() || std::abs(pos - static_cast<double>(bin)) > 0.5)
      throw Error(ErrorCode::OutOfRange, "no spectrogram bin at " + std::to_string(f) + " Hz");
    return m[bin];
  };

  SsvepResult r;
  for (const auto& t : targets) {
    PsdScore s;
    s.target_hz = t.frequency_hz;
    s.fundamental_power = power_at(t.frequency_hz);
    s.total_score = s.fundamental_power;
    for (int h = 2; h <= n_harmonics + 1; ++h) {
      s.harmonic_powers.push_back(power_at(t.frequency_hz * h));
      s.total_score += s.harmonic_powers.back();
    }
    r.scores.push_back(std::move(s));
  }
  r.decision = decide_ssvep(targets, r.scores);
  return r;
}

}  // namespace eegbci
