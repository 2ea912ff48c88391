#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eegbci {

/// Mixed-radix Cooley-Tukey FFT for any length. Prime factors are handled
/// with a direct butterfly, so lengths with large prime factors degrade
/// toward O(n^2). Execution is const and safe to share across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// X[k] = sum_j x[j] exp(-2 pi i j k / n)
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Inverse transform including the 1/n factor.
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  std::vector<std::complex<double>> forward_real(std::span<const double> in) const;

 private:
  void transform(const std::complex<double>* in, std::complex<double>* out, std::size_t n,
                 std::size_t stride, std::size_t level, std::complex<double>* scratch) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> twiddles_;
  std::size_t max_factor_ = 1;
};

}  // namespace eegbci
