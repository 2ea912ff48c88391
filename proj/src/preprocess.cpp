#include "eegbci/preprocess.hpp"

#include <cmath>

namespace eegbci {

void PreprocessConfig::validate(double rate_hz) const {
  if (!(trim_s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "trim_s must be >= 0");
  if (enable_bandpass) FilterSpec::bandpass(lo_hz, hi_hz, order).validate(rate_hz);
  if (enable_notch) FilterSpec::notch(notch_hz, notch_q).validate(rate_hz);
}

std::int64_t trim_offset(const Recording& rec, double seconds) {
  if (!(seconds >= 0.0)) throw Error(ErrorCode::InvalidArgument, "trim length must be >= 0");
  return std::llround(seconds * rec.rate_hz());
}

Recording trim_head(const Recording& rec, double seconds) {
  const auto offset = trim_offset(rec, seconds);
  if (offset == 0) return rec;
  if (static_cast<std::size_t>(offset) >= rec.n_samples())
    throw Error(ErrorCode::OutOfRange, "cannot trim " + std::to_string(seconds) + " s from a " +
                                           std::to_string(rec.duration_s()) + " s recording");
  Matrix kept = rec.data().rightCols(static_cast<Eigen::Index>(rec.n_samples()) - offset);
  return rec.with_data(std::move(kept));
}

Recording apply_filter(const Recording& rec, const FilterSpec& spec, kernels::Exec exec) {
  const SosFilter sos = spec.design(rec.rate_hz());
  return rec.with_data(kernels::filtfilt_rows(rec.data(), sos, spec.pad_length(), exec));
}

Recording bandpass(const Recording& rec, double lo_hz, double hi_hz, int order, kernels::Exec exec) {
  return apply_filter(rec, FilterSpec::bandpass(lo_hz, hi_hz, order), exec);
}

Recording notch(const Recording& rec, double f0_hz, double q, kernels::Exec exec) {
  return apply_filter(rec, FilterSpec::notch(f0_hz, q), exec);
}

Recording standardize(const Recording& rec, kernels::Exec exec) {
  return rec.with_data(kernels::standardize_rows(rec.data(), exec));
}

Recording clean_pipeline(const Recording& rec, const PreprocessConfig& config, kernels::Exec exec) {
  config.validate(rec.rate_hz());
  Recording out = trim_head(rec, config.trim_s);
  if (config.enable_bandpass) out = bandpass(out, config.lo_hz, config.hi_hz, config.order, exec);
  if (config.enable_notch) out = notch(out, config.notch_hz, config.notch_q, exec);
  if (config.enable_standardize) out = standardize(out, exec);
  return out;
}

}  // namespace eegbci
