#pragma once

#include <cstdint>

#include "eegbci/types.hpp"

namespace eegbci {

/// Moves every marker `offset_samples` earlier; markers that would land
/// before sample 0 are dropped. Pair with trim_head.
MarkerLog shift_markers(const MarkerLog& log, std::int64_t offset_samples);

/// Sorted timestamps, all within [0, n_samples], stimulus start/end pairing.
void validate_marker_log(const MarkerLog& log, std::size_t n_samples);

bool has_task(const MarkerLog& log, Task task);

/// Cuts one epoch per StimulusStart of `task`, starting at the marker and
/// spanning epoch_seconds * rate samples. Group ids count up from
/// `first_group_id` in trial order.
EpochSet slice_epochs(const Recording& rec, const MarkerLog& log, Task task,
                      double epoch_seconds = 5.0, int first_group_id = 0);

}  // namespace eegbci
