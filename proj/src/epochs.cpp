#include <cmath>
#include <limits>

#include "eegbci/markers.hpp"

namespace eegbci {

EpochSet slice_epochs(const Recording& rec, const MarkerLog& log, Task task, double epoch_seconds,
                      int first_group_id) {
  if (!(epoch_seconds > 0.0))
    throw Error(ErrorCode::InvalidArgument, "epoch length must be positive");
  const auto width = static_cast<std::int64_t>(std::llround(epoch_seconds * rec.rate_hz()));
  const auto n = static_cast<std::int64_t>(rec.n_samples());

  EpochSet set;
  set.rate_hz = rec.rate_hz();
  set.layout = rec.layout();
  set.task = task;

  std::int64_t prev_t = std::numeric_limits<std::int64_t>::min();
  std::int64_t prev_end = std::numeric_limits<std::int64_t>::min();
  int group = first_group_id;
  for (const auto& m : log.markers) {
    if (m.t_sample < prev_t)
      throw Error(ErrorCode::Protocol, "marker log is not sorted by t_sample");
    prev_t = m.t_sample;
    if (m.task != task || m.phase != Phase::StimulusStart) continue;

    if (m.t_sample < 0 || m.t_sample + width > n)
      throw Error(ErrorCode::OutOfRange,
                  "stimulus of trial " + std::to_string(m.trial) + " at sample " +
                      std::to_string(m.t_sample) + " runs past the end of the recording (" +
                      std::to_string(n) + " samples)");
    if (m.t_sample < prev_end)
      throw Error(ErrorCode::Protocol,
                  "stimulus of trial " + std::to_string(m.trial) + " overlaps the previous epoch");
    prev_end = m.t_sample + width;

    Epoch e;
    e.data = rec.data().middleCols(m.t_sample, width);
    e.label = m.truth;
    e.group_id = group++;
    e.task = task;
    set.epochs.push_back(std::move(e));
  }
  if (set.epochs.empty())
    throw Error(ErrorCode::TaskAbsent,
                "no " + std::string(to_string(task)) + " stimuli in the marker log");
  return set;
}

}  // namespace eegbci
