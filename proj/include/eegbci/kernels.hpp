#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eegbci/fft.hpp"
#include "eegbci/filters.hpp"
#include "eegbci/types.hpp"

/// Data-parallel inner loops of the toolkit.
///
/// Every kernel exists twice with the same signature: `serial::` is the
/// reference, `parallel::` distributes independent rows/windows/epochs over
/// OpenMP threads. Each output element is computed by exactly the same
/// arithmetic in both, so results are bitwise identical and independent of
/// the thread count.
namespace eegbci::kernels {

enum class Exec { Serial, Parallel };

/// Spectral layout of a windowed power computation.
struct PowerLayout {
  std::size_t window = 0;
  std::size_t hop = 0;
  std::size_t n_windows = 0;
  std::size_t n_bins = 0;  // one-sided: window / 2 + 1
};

#define EEGBCI_KERNEL_DECLS                                                                      \
  /* Zero-phase filtering of every row. */                                                       \
  Matrix filtfilt_rows(const Matrix& x, const SosFilter& sos, std::size_t padlen);               \
  /* Per-row z-scoring with sample std; constant rows become zero. */                            \
  Matrix standardize_rows(const Matrix& x);                                                      \
  /* out[(r * n_windows + w) * n_bins + k]: one-sided power, Parseval-scaled. */                 \
  void windowed_power(const Matrix& x, std::span<const std::size_t> rows,                        \
                      std::span<const double> taper, const PowerLayout& layout,                  \
                      const FftPlan& plan, std::span<double> out);                               \
  /* Channel covariance of each epoch divided by its trace. */                                   \
  std::vector<Eigen::MatrixXd> normalized_covariances(std::span<const Epoch* const> epochs);     \
  /* log(var_i / sum_j var_j) of each spatially filtered epoch, one row per epoch. */            \
  Eigen::MatrixXd log_variance_features(const Eigen::MatrixXd& filters,                          \
                                        std::span<const Epoch* const> epochs);

namespace serial {
EEGBCI_KERNEL_DECLS
}
namespace parallel {
EEGBCI_KERNEL_DECLS
}

#undef EEGBCI_KERNEL_DECLS

// Single-item bodies shared by both implementations.
namespace detail {
std::vector<double> standardize_row(std::span<const double> row);
void window_power(std::span<const double> row, std::size_t start, std::span<const double> taper,
                  const FftPlan& plan, std::span<double> out);
Eigen::MatrixXd normalized_covariance(const Matrix& data);
Eigen::VectorXd log_variance(const Eigen::MatrixXd& filters, const Matrix& data);
}  // namespace detail

inline Matrix filtfilt_rows(const Matrix& x, const SosFilter& sos, std::size_t padlen,
                            Exec exec = Exec::Parallel) {
  return exec == Exec::Serial ? serial::filtfilt_rows(x, sos, padlen)
                              : parallel::filtfilt_rows(x, sos, padlen);
}

inline Matrix standardize_rows(const Matrix& x, Exec exec = Exec::Parallel) {
  return exec == Exec::Serial ? serial::standardize_rows(x) : parallel::standardize_rows(x);
}

inline void windowed_power(const Matrix& x, std::span<const std::size_t> rows,
                           std::span<const double> taper, const PowerLayout& layout,
                           const FftPlan& plan, std::span<double> out, Exec exec = Exec::Parallel) {
  if (exec == Exec::Serial)
    serial::windowed_power(x, rows, taper, layout, plan, out);
  else
    parallel::windowed_power(x, rows, taper, layout, plan, out);
}

inline std::vector<Eigen::MatrixXd> normalized_covariances(std::span<const Epoch* const> epochs,
                                                           Exec exec = Exec::Parallel) {
  return exec == Exec::Serial ? serial::normalized_covariances(epochs)
                              : parallel::normalized_covariances(epochs);
}

inline Eigen::MatrixXd log_variance_features(const Eigen::MatrixXd& filters,
                                             std::span<const Epoch* const> epochs,
                                             Exec exec = Exec::Parallel) {
  return exec == Exec::Serial ? serial::log_variance_features(filters, epochs)
                              : parallel::log_variance_features(filters, epochs);
}

}  // namespace eegbci::kernels
