#include <omp.h>

#include "eegbci/kernels.hpp"

namespace eegbci::kernels::parallel {

Matrix filtfilt_rows(const Matrix& x, const SosFilter& sos, std::size_t padlen) {
  Matrix out(x.rows(), x.cols());
  const Eigen::Index rows = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto y = sos_filtfilt(sos, std::span<const double>(x.row(r).data(), x.cols()), padlen);
    std::copy(y.begin(), y.end(), out.row(r).data());
  }
  return out;
}

Matrix standardize_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  const Eigen::Index rows = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto y = detail::standardize_row(std::span<const double>(x.row(r).data(), x.cols()));
    std::copy(y.begin(), y.end(), out.row(r).data());
  }
  return out;
}

void windowed_power(const Matrix& x, std::span<const std::size_t> rows,
                    std::span<const double> taper, const PowerLayout& layout, const FftPlan& plan,
                    std::span<double> out) {
  const auto cells = static_cast<std::int64_t>(rows.size() * layout.n_windows);
#pragma omp parallel for schedule(static)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const auto r = static_cast<std::size_t>(cell) / layout.n_windows;
    const auto w = static_cast<std::size_t>(cell) % layout.n_windows;
    const std::span<const double> row(x.row(static_cast<Eigen::Index>(rows[r])).data(), x.cols());
    detail::window_power(row, w * layout.hop, taper, plan,
                         out.subspan(static_cast<std::size_t>(cell) * layout.n_bins, layout.n_bins));
  }
}

std::vector<Eigen::MatrixXd> normalized_covariances(std::span<const Epoch* const> epochs) {
  std::vector<Eigen::MatrixXd> out(epochs.size());
  const auto n = static_cast<std::int64_t>(epochs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[i] = detail::normalized_covariance(epochs[i]->data);
  return out;
}

Eigen::MatrixXd log_variance_features(const Eigen::MatrixXd& filters,
                                      std::span<const Epoch* const> epochs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(epochs.size()), filters.rows());
  const auto n = static_cast<std::int64_t>(epochs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out.row(i) = detail::log_variance(filters, epochs[i]->data).transpose();
  return out;
}

}  // namespace eegbci::kernels::parallel
