#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eegbci/types.hpp"

namespace eegbci {

struct SynthConfig {
  double rate_hz = 1000.0;
  ChannelLayout layout = ChannelLayout::standard16();
  /// Injected task power over background power (linear).
  double snr = 1.0;
  std::uint64_t seed = 0;

  // Artifact toggles.
  bool wifi_wavelets = true;
  std::string wavelet_channel = "Cz";
  double wavelet_amplitude = 10.0;
  bool noisy_channel = true;
  std::string noisy_channel_name = "P4";
  /// Extra white-noise variance on the noisy channel.
  double noisy_variance = 9.0;
  /// Large transient in the leading trim region.
  bool head_spike = true;

  // SSVEP: harmonic power over fundamental power.
  double harmonic_gain_10hz = 1.5;
  double harmonic_gain_15hz = 0.5;
  /// Variance ratio between the dominant and the other lateralized source.
  double lateral_ratio = 4.0;
  double alpha_snr = 2.0;

  // Session timing, seconds.
  double head_s = 2.0;
  double prompt_s = 1.0;
  double stimulus_s = 5.0;
  double gap_s = 1.0;
  double tail_s = 1.0;

  int sessions = 6;
  int trials_per_session = 10;
  /// Trials of laryngeal imagery in the final session.
  int last_session_laryngeal_imagery_trials = 3;

  void validate() const;
};

/// Unit-variance pink (1/f) noise, independent per channel.
Recording gen_background(const SynthConfig& config, std::size_t n_samples, std::uint64_t seed);

/// Adds sinusoids at target_hz and 2 * target_hz to O1, O2, P3, P4 over
/// [start, start + n). Total power equals config.snr, split between the
/// fundamental and the harmonic by harmonic_gain.
void inject_ssvep(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config,
                  double target_hz, double harmonic_gain, std::uint64_t seed);

/// One 5 s SSVEP epoch on a fresh background. 10 Hz is Yes, 15 Hz is No.
Epoch gen_ssvep_trial(const SynthConfig& config, double target_hz, double harmonic_gain, std::uint64_t seed);

/// Orthonormal spatial vectors of the two lateralized sources of `task`
/// (channels x 2). Column 0 dominates Yes trials.
Eigen::MatrixXd lateral_mixing(const SynthConfig& config, Task task);

void inject_lateralized(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config,
                        const Eigen::MatrixXd& mixing, Label label, std::uint64_t seed);

/// One 5 s epoch with class-dependent source variances mixed by
/// lateral_mixing(config, task).
Epoch gen_lateralized_trial(const SynthConfig& config, Task task, Label label, std::uint64_t seed);

/// 10 Hz occipital rhythm at config.alpha_snr.
void inject_alpha(Matrix& data, std::size_t start, std::size_t n, const SynthConfig& config, std::uint64_t seed);

/// Adds the enabled artifacts. With every toggle off the recording is
/// returned unchanged.
Recording gen_artifacts(const Recording& rec, const SynthConfig& config, std::uint64_t seed);

struct SessionData {
  int session = 0;
  Task task = Task::Ssvep;
  Recording recording;
  MarkerLog markers;
};

/// Number of trials of `task` in session `session`.
int trials_in_session(const SynthConfig& config, Task task, int session);

/// One recording of `task`: head, then trials of prompt / stimulus / gap,
/// with balanced shuffled labels.
SessionData gen_session(const SynthConfig& config, Task task, int session);

}  // namespace eegbci
