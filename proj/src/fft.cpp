#include "eegbci/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegbci/error.hpp"

namespace eegbci {

using cd = std::complex<double>;

namespace {
// Plain product; std::complex operator* adds inf/nan recovery we never need.
inline cd mul(cd a, cd b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "FFT length must be positive");
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p) {
    while (rest % p == 0) {
      factors_.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) factors_.push_back(rest);
  if (factors_.empty()) factors_.push_back(1);
  max_factor_ = *std::max_element(factors_.begin(), factors_.end());

  twiddles_.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    twiddles_[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
}

void FftPlan::transform(const cd* in, cd* out, std::size_t n, std::size_t stride, std::size_t level,
                        cd* scratch) const {
  const std::size_t p = factors_[level];
  const std::size_t m = n / p;
  if (m == 1) {
    for (std::size_t q = 0; q < p; ++q) out[q] = in[q * stride];
  } else {
    for (std::size_t q = 0; q < p; ++q) transform(in + q * stride, out + q * m, m, stride * p, level + 1, scratch);
  }
  if (p == 1) return;

  const std::size_t tw_step = n_ / n;   // W_n^j == W_N^(j * N/n)
  const std::size_t p_step = n_ / p;    // W_p^j == W_N^(j * N/p)
  if (p == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const cd a = out[k];
      const cd b = mul(out[m + k], twiddles_[k * tw_step]);
      out[k] = a + b;
      out[m + k] = a - b;
    }
    return;
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t q = 0; q < p; ++q) scratch[q] = mul(out[q * m + k], twiddles_[q * k * tw_step]);
    for (std::size_t u = 0; u < p; ++u) {
      cd acc = scratch[0];
      std::size_t idx = 0;
      for (std::size_t q = 1; q < p; ++q) {
        idx += u;
        if (idx >= p) idx -= p;
        acc += mul(scratch[q], twiddles_[idx * p_step]);
      }
      out[u * m + k] = acc;
    }
  }
}

void FftPlan::forward(std::span<const cd> in, std::span<cd> out) const {
  if (in.size() != n_ || out.size() != n_)
    throw Error(ErrorCode::InvalidArgument, "FFT buffer length mismatch");
  std::vector<cd> scratch(max_factor_);
  if (in.data() == out.data()) {
    std::vector<cd> copy(in.begin(), in.end());
    transform(copy.data(), out.data(), n_, 1, 0, scratch.data());
  } else {
    transform(in.data(), out.data(), n_, 1, 0, scratch.data());
  }
}

void FftPlan::inverse(std::span<const cd> in, std::span<cd> out) const {
  std::vector<cd> conj_in(in.size());
  std::transform(in.begin(), in.end(), conj_in.begin(), [](cd v) { return std::conj(v); });
  forward(conj_in, out);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v = std::conj(v) * scale;
}

std::vector<cd> FftPlan::forward_real(std::span<const double> in) const {
  std::vector<cd> buf(in.begin(), in.end());
  std::vector<cd> out(n_);
  forward(buf, out);
  return out;
}

}  // namespace eegbci
