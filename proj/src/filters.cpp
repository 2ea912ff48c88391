#include "eegbci/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "eegbci/error.hpp"

namespace eegbci {

namespace {

// Quality factor of the k-th conjugate pole pair of an order-N Butterworth.
double butterworth_q(int order, int k) {
  return 1.0 / (2.0 * std::sin(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order)));
}

void check_order(int order) {
  if (order < 2 || order % 2 != 0)
    throw Error(ErrorCode::InvalidArgument,
                "filter order must be even and >= 2, got " + std::to_string(order));
}

void check_cutoff(double f, double rate_hz) {
  if (!(f > 0.0) || !(f < rate_hz / 2.0))
    throw Error(ErrorCode::Nyquist, "corner frequency " + std::to_string(f) +
                                        " Hz must lie in (0, " + std::to_string(rate_hz / 2.0) +
                                        ") Hz");
}

}  // namespace

FilterSpec FilterSpec::bandpass(double lo_hz, double hi_hz, int order) {
  FilterSpec s;
  s.kind = Kind::Bandpass;
  s.lo_hz = lo_hz;
  s.hi_hz = hi_hz;
  s.order = order;
  return s;
}

FilterSpec FilterSpec::notch(double f0_hz, double q) {
  FilterSpec s;
  s.kind = Kind::Notch;
  s.f0_hz = f0_hz;
  s.q = q;
  s.order = 2;
  return s;
}

void FilterSpec::validate(double rate_hz) const {
  check_order(order);
  if (kind == Kind::Bandpass) {
    check_cutoff(lo_hz, rate_hz);
    check_cutoff(hi_hz, rate_hz);
    if (!(lo_hz < hi_hz))
      throw Error(ErrorCode::InvalidArgument, "bandpass needs lo_hz < hi_hz");
  } else {
    check_cutoff(f0_hz, rate_hz);
    if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "notch Q must be positive");
  }
}

SosFilter FilterSpec::design(double rate_hz) const {
  validate(rate_hz);
  if (kind == Kind::Notch) return notch_filter(f0_hz, q, rate_hz);
  SosFilter sos = butterworth_highpass(order, lo_hz, rate_hz);
  const SosFilter lp = butterworth_lowpass(order, hi_hz, rate_hz);
  sos.insert(sos.end(), lp.begin(), lp.end());
  return sos;
}

std::size_t FilterSpec::pad_length() const {
  const int effective = kind == Kind::Bandpass ? 2 * order : order;
  return static_cast<std::size_t>(3 * effective);
}

SosFilter butterworth_lowpass(int order, double cutoff_hz, double rate_hz) {
  check_order(order);
  check_cutoff(cutoff_hz, rate_hz);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / rate_hz;
  const double cw = std::cos(w0);
  SosFilter sos;
  for (int k = 0; k < order / 2; ++k) {
    const double alpha = std::sin(w0) / (2.0 * butterworth_q(order, k));
    const double a0 = 1.0 + alpha;
    sos.push_back({(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0, (1.0 - cw) / 2.0 / a0,
                   -2.0 * cw / a0, (1.0 - alpha) / a0});
  }
  return sos;
}

SosFilter butterworth_highpass(int order, double cutoff_hz, double rate_hz) {
  check_order(order);
  check_cutoff(cutoff_hz, rate_hz);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / rate_hz;
  const double cw = std::cos(w0);
  SosFilter sos;
  for (int k = 0; k < order / 2; ++k) {
    const double alpha = std::sin(w0) / (2.0 * butterworth_q(order, k));
    const double a0 = 1.0 + alpha;
    sos.push_back({(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0, (1.0 + cw) / 2.0 / a0,
                   -2.0 * cw / a0, (1.0 - alpha) / a0});
  }
  return sos;
}

SosFilter notch_filter(double f0_hz, double q, double rate_hz) {
  check_cutoff(f0_hz, rate_hz);
  const double w0 = 2.0 * std::numbers::pi * f0_hz / rate_hz;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {{1.0 / a0, -2.0 * cw / a0, 1.0 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0}};
}

std::complex<double> frequency_response(const SosFilter& sos, double freq_hz, double rate_hz) {
  const std::complex<double> z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / rate_hz);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h = 1.0;
  for (const auto& s : sos) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

std::vector<std::array<double, 2>> sos_step_state(const SosFilter& sos) {
  std::vector<std::array<double, 2>> zi;
  zi.reserve(sos.size());
  double scale = 1.0;
  for (const auto& s : sos) {
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double z2 = s.b2 - s.a2 * gain;
    const double z1 = s.b1 - s.a1 * gain + z2;
    zi.push_back({z1 * scale, z2 * scale});
    scale *= gain;
  }
  return zi;
}

void sos_filter(const SosFilter& sos, std::span<const double> x, std::span<double> y,
                std::vector<std::array<double, 2>> state) {
  if (x.data() != y.data()) std::copy(x.begin(), x.end(), y.begin());
  for (std::size_t k = 0; k < sos.size(); ++k) {
    const auto& s = sos[k];
    double z1 = state[k][0], z2 = state[k][1];
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<double> sos_filtfilt(const SosFilter& sos, std::span<const double> x, std::size_t padlen) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const std::size_t pad = std::min(padlen, n - 1);

  // Odd extension: 2*x[0] - x[pad..1] | x | 2*x[n-1] - x[n-2..n-1-pad]
  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

  const auto zi = sos_step_state(sos);
  auto scaled = [&](double v) {
    auto s = zi;
    for (auto& st : s) {
      st[0] *= v;
      st[1] *= v;
    }
    return s;
  };

  sos_filter(sos, ext, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());
  sos_filter(sos, ext, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace eegbci
