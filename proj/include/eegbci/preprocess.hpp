#pragma once

#include "eegbci/filters.hpp"
#include "eegbci/kernels.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

struct PreprocessConfig {
  double trim_s = 2.0;
  bool enable_bandpass = true;
  double lo_hz = 5.0;
  double hi_hz = 50.0;
  int order = 4;
  bool enable_notch = true;
  double notch_hz = 60.0;
  double notch_q = 30.0;
  bool enable_standardize = true;

  /// Checks every enabled stage against the sample rate.
  void validate(double rate_hz) const;
};

/// Drops the first round(seconds * rate) samples. Marker logs recorded
/// against the original clock must be moved with shift_markers(log,
/// trim_offset(rec, seconds)).
Recording trim_head(const Recording& rec, double seconds = 2.0);
std::int64_t trim_offset(const Recording& rec, double seconds);

Recording apply_filter(const Recording& rec, const FilterSpec& spec,
                       kernels::Exec exec = kernels::Exec::Parallel);
Recording bandpass(const Recording& rec, double lo_hz = 5.0, double hi_hz = 50.0, int order = 4,
                   kernels::Exec exec = kernels::Exec::Parallel);
Recording notch(const Recording& rec, double f0_hz = 60.0, double q = 30.0,
                kernels::Exec exec = kernels::Exec::Parallel);
/// Per-channel z-score over the whole recording (sample std). Constant
/// channels become all zeros.
Recording standardize(const Recording& rec, kernels::Exec exec = kernels::Exec::Parallel);

/// trim -> bandpass -> notch -> standardize, each stage switchable.
Recording clean_pipeline(const Recording& rec, const PreprocessConfig& config,
                         kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace eegbci
