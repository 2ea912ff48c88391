#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eegbci {

/// Second-order section, normalized so a0 == 1. Transposed direct form II.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

using SosFilter = std::vector<Biquad>;

struct FilterSpec {
  enum class Kind { Bandpass, Notch };

  Kind kind = Kind::Bandpass;
  double lo_hz = 5.0;
  double hi_hz = 50.0;
  double f0_hz = 60.0;
  double q = 30.0;
  /// Butterworth order of each band edge. Notches are always one biquad.
  int order = 4;

  static FilterSpec bandpass(double lo_hz, double hi_hz, int order = 4);
  static FilterSpec notch(double f0_hz, double q = 30.0);

  /// Throws ErrorCode::Nyquist / InvalidArgument.
  void validate(double rate_hz) const;
  SosFilter design(double rate_hz) const;
  /// Reflection pad length used by forward-backward filtering.
  std::size_t pad_length() const;
};

SosFilter butterworth_lowpass(int order, double cutoff_hz, double rate_hz);
SosFilter butterworth_highpass(int order, double cutoff_hz, double rate_hz);
SosFilter notch_filter(double f0_hz, double q, double rate_hz);

/// Complex frequency response of the cascade at `freq_hz`.
std::complex<double> frequency_response(const SosFilter& sos, double freq_hz, double rate_hz);

/// Steady-state section states for a unit step, as in scipy's sosfilt_zi.
std::vector<std::array<double, 2>> sos_step_state(const SosFilter& sos);

/// Causal filtering of `x` into `y` (same length) from the given state.
void sos_filter(const SosFilter& sos, std::span<const double> x, std::span<double> y,
                std::vector<std::array<double, 2>> state);

/// Zero-phase forward-backward filtering with odd reflection padding of
/// `padlen` samples (clamped to n - 1) and step-matched initial states.
std::vector<double> sos_filtfilt(const SosFilter& sos, std::span<const double> x, std::size_t padlen);

}  // namespace eegbci
