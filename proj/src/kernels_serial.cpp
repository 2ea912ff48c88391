#include <cmath>

#include "eegbci/kernels.hpp"

namespace eegbci::kernels {

namespace detail {

std::vector<double> standardize_row(std::span<const double> row) {
  const std::size_t n = row.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  double lo = row[0], hi = row[0];
  double sum = 0.0;
  for (double v : row) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) return out;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : row) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  for (std::size_t i = 0; i < n; ++i) out[i] = (row[i] - mean) / sd;
  return out;
}

void window_power(std::span<const double> row, std::size_t start, std::span<const double> taper,
                  const FftPlan& plan, std::span<double> out) {
  const std::size_t n = taper.size();
  std::vector<std::complex<double>> buf(n), spec(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = row[start + i] * taper[i];
  plan.forward(buf, spec);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    out[k] = (edge ? 1.0 : 2.0) * std::norm(spec[k]) * inv_n;
  }
}

Eigen::MatrixXd normalized_covariance(const Matrix& data) {
  Eigen::MatrixXd centered = data.colwise() - data.rowwise().mean();
  Eigen::MatrixXd cov = centered * centered.transpose();
  const double tr = cov.trace();
  if (tr > 0.0) cov /= tr;
  return cov;
}

Eigen::VectorXd log_variance(const Eigen::MatrixXd& filters, const Matrix& data) {
  Eigen::MatrixXd projected = filters * data;
  Eigen::MatrixXd centered = projected.colwise() - projected.rowwise().mean();
  Eigen::VectorXd var = centered.rowwise().squaredNorm();
  const double total = var.sum();
  if (!(total > 0.0))
    return Eigen::VectorXd::Constant(filters.rows(), -std::log(static_cast<double>(filters.rows())));
  return (var / total).array().log().matrix();
}

}  // namespace detail

namespace serial {

Matrix filtfilt_rows(const Matrix& x, const SosFilter& sos, std::size_t padlen) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto y = sos_filtfilt(sos, std::span<const double>(x.row(r).data(), x.cols()), padlen);
    std::copy(y.begin(), y.end(), out.row(r).data());
  }
  return out;
}

Matrix standardize_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto y = detail::standardize_row(std::span<const double>(x.row(r).data(), x.cols()));
    std::copy(y.begin(), y.end(), out.row(r).data());
  }
  return out;
}

void windowed_power(const Matrix& x, std::span<const std::size_t> rows,
                    std::span<const double> taper, const PowerLayout& layout, const FftPlan& plan,
                    std::span<double> out) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::span<const double> row(x.row(static_cast<Eigen::Index>(rows[r])).data(), x.cols());
    for (std::size_t w = 0; w < layout.n_windows; ++w)
      detail::window_power(row, w * layout.hop, taper, plan,
                           out.subspan((r * layout.n_windows + w) * layout.n_bins, layout.n_bins));
  }
}

std::vector<Eigen::MatrixXd> normalized_covariances(std::span<const Epoch* const> epochs) {
  std::vector<Eigen::MatrixXd> out(epochs.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) out[i] = detail::normalized_covariance(epochs[i]->data);
  return out;
}

Eigen::MatrixXd log_variance_features(const Eigen::MatrixXd& filters,
                                      std::span<const Epoch* const> epochs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(epochs.size()), filters.rows());
  for (std::size_t i = 0; i < epochs.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = detail::log_variance(filters, epochs[i]->data).transpose();
  return out;
}

}  // namespace serial
}  // namespace eegbci::kernels
