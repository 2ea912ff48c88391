#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eegbci/kernels.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

struct SpectrogramParams {
  std::size_t window_samples = 2000;
  std::size_t hop_samples = 1000;
  double band_lo_hz = 5.0;
  double band_hi_hz = 50.0;
};

/// Channels drawn over the visual cortex; used for SSVEP and alpha.
std::vector<std::string> occipital_channels();

/// Hann-windowed short-time power. values is laid out
/// [channel][freq_bin][window], bins restricted to the requested band.
struct Spectrogram {
  std::vector<std::string> channels;
  std::vector<double> freqs_hz;
  std::size_t window_samples = 0;
  std::size_t hop_samples = 0;
  std::size_t n_windows = 0;
  std::vector<double> values;
  int group_id = 0;
  Label label = Label::Yes;

  std::size_t n_bins() const noexcept { return freqs_hz.size(); }
  double at(std::size_t channel, std::size_t bin, std::size_t window) const {
    return values[(channel * n_bins() + bin) * n_windows + window];
  }
};

/// Periodic Hann taper of length n.
std::vector<double> hann_window(std::size_t n);

std::size_t window_count(std::size_t n_samples, std::size_t window, std::size_t hop);

Spectrogram spectrogram(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                        const std::vector<std::string>& channels,
                        const SpectrogramParams& params = {},
                        kernels::Exec exec = kernels::Exec::Parallel);

struct WindowFeatures {
  std::vector<double> values;
  int group_id = 0;
};

/// One vector per time window: channel-major concatenation of band power.
std::vector<WindowFeatures> features_from_spectrogram(const Spectrogram& spec);

/// Mean power per bin across all channels and windows.
std::vector<double> mean_spectrum(const Spectrogram& spec);

/// CSV with one block per channel: channel,freq_hz,w0,w1,...
void write_spectrogram_csv(const Spectrogram& spec, std::ostream& out);

struct AlphaParams {
  double alpha_lo_hz = 8.0;
  double alpha_hi_hz = 12.0;
  double total_lo_hz = 5.0;
  double total_hi_hz = 50.0;
  /// Band-power ratio that maps to a score of exactly 0.5.
  double reference_ratio = 0.25;
};

/// Score in [0, 1], monotone in the 8-12 Hz share of 5-50 Hz power. Above
/// 0.5 means eyes closed. A silent epoch scores 0.
double detect_alpha(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                    const std::vector<std::string>& channels = {"O1", "O2"},
                    const AlphaParams& params = {});
/// The ratio-to-score map used by detect_alpha.
double alpha_score_from_ratio(double ratio, double reference_ratio);

struct PsdScore {
  double target_hz = 0.0;
  double fundamental_power = 0.0;
  std::vector<double> harmonic_powers;
  double total_score = 0.0;
};

struct SsvepTarget {
  double frequency_hz;
  Label label;
};

struct SsvepResult {
  Label decision = Label::Yes;
  std::vector<PsdScore> scores;
};

/// Default stimulus mapping: 10 Hz square means Yes, 15 Hz means No.
std::vector<SsvepTarget> default_ssvep_targets();

/// Sums equal-weight power at each target's fundamental and its multiples
/// 2..n_harmonics+1, averaged over channels and windows. The decision is the
/// best-scoring target; exact ties go to the earliest Yes target.
SsvepResult ssvep_score(const Epoch& epoch, double rate_hz, const ChannelLayout& layout,
                        const std::vector<SsvepTarget>& targets = default_ssvep_targets(),
                        int n_harmonics = 2,
                        const std::vector<std::string>& channels = occipital_channels(),
                        const SpectrogramParams& params = {});

/// Decision rule alone, exposed for callers that bring their own scores.
Label decide_ssvep(const std::vector<SsvepTarget>& targets, const std::vector<PsdScore>& scores);

}  // namespace eegbci
