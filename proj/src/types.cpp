#include "eegbci/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace eegbci {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Io: return "io";
    case ErrorCode::Format: return "format";
    case ErrorCode::ChannelMismatch: return "channel_mismatch";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::TaskAbsent: return "task_absent";
    case ErrorCode::Nyquist: return "nyquist";
    case ErrorCode::SingleClass: return "single_class";
    case ErrorCode::NotPositiveDefinite: return "not_positive_definite";
    case ErrorCode::LayoutMismatch: return "layout_mismatch";
    case ErrorCode::WidthMismatch: return "width_mismatch";
    case ErrorCode::TooFewGroups: return "too_few_groups";
    case ErrorCode::DegenerateFold: return "degenerate_fold";
    case ErrorCode::EmptyTestSet: return "empty_test_set";
    case ErrorCode::Leakage: return "leakage";
    case ErrorCode::Protocol: return "protocol";
  }
  return "unknown";
}

std::string_view to_string(Label label) { return label == Label::Yes ? "Yes" : "No"; }

std::string_view to_string(Task task) {
  switch (task) {
    case Task::EyesOpenClosed: return "EyesOpenClosed";
    case Task::Ssvep: return "Ssvep";
    case Task::MotorActivity: return "MotorActivity";
    case Task::MotorImagery: return "MotorImagery";
    case Task::LaryngealActivity: return "LaryngealActivity";
    case Task::LaryngealImagery: return "LaryngealImagery";
  }
  return "?";
}

std::string_view short_name(Task task) {
  switch (task) {
    case Task::EyesOpenClosed: return "eyes";
    case Task::Ssvep: return "ssvep";
    case Task::MotorActivity: return "motor-activity";
    case Task::MotorImagery: return "motor-imagery";
    case Task::LaryngealActivity: return "laryngeal-activity";
    case Task::LaryngealImagery: return "laryngeal-imagery";
  }
  return "?";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::PromptShown: return "PromptShown";
    case Phase::ResponseKey: return "ResponseKey";
    case Phase::StimulusStart: return "StimulusStart";
    case Phase::StimulusEnd: return "StimulusEnd";
    case Phase::SessionAbort: return "SessionAbort";
  }
  return "?";
}

Label parse_label(std::string_view text) {
  if (text == "Yes") return Label::Yes;
  if (text == "No") return Label::No;
  throw Error(ErrorCode::Format, "unknown truth label '" + std::string(text) + "'");
}

Task parse_task(std::string_view text) {
  for (Task t : kAllTasks) {
    if (text == to_string(t) || text == short_name(t)) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown task '" + std::string(text) + "'");
}

Phase parse_phase(std::string_view text) {
  for (Phase p : {Phase::PromptShown, Phase::ResponseKey, Phase::StimulusStart,
                  Phase::StimulusEnd, Phase::SessionAbort}) {
    if (text == to_string(p)) return p;
  }
  throw Error(ErrorCode::Format, "unknown marker phase '" + std::string(text) + "'");
}

ChannelLayout ChannelLayout::standard16() {
  return ChannelLayout({"Fp1", "Fp2", "CP1", "CP2", "FC1", "FC2", "O1", "O2",
                        "F7", "F8", "Fz", "Cz", "T3", "T4", "P3", "P4"});
}

ChannelLayout::ChannelLayout(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw Error(ErrorCode::InvalidArgument, "empty channel name");
    if (!seen.insert(n).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate channel name '" + n + "'");
  }
}

std::optional<std::size_t> ChannelLayout::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ChannelLayout::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::InvalidArgument, "unknown channel '" + std::string(name) + "'");
}

std::vector<std::size_t> ChannelLayout::indices_of(const std::vector<std::string>& names) const {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(index_of(n));
  return out;
}

Recording::Recording(Matrix data, double rate_hz, ChannelLayout layout, Metadata meta)
    : data_(std::move(data)), rate_hz_(rate_hz), layout_(std::move(layout)), meta_(std::move(meta)) {
  if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_))
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  if (static_cast<std::size_t>(data_.rows()) != layout_.count())
    throw Error(ErrorCode::ChannelMismatch,
                "layout names " + std::to_string(layout_.count()) + " channels but data has " +
                    std::to_string(data_.rows()) + " rows");
  if (!data_.allFinite()) throw Error(ErrorCode::NonFinite, "recording contains non-finite samples");
}

Recording Recording::with_meta(std::string key, std::string value) const {
  Metadata m = meta_;
  m[std::move(key)] = std::move(value);
  return Recording(data_, rate_hz_, layout_, std::move(m));
}

void EpochSet::validate() const {
  if (!(rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "epoch set needs a positive rate");
  std::set<int> groups;
  const auto width = window_samples();
  for (const auto& e : epochs) {
    if (static_cast<std::size_t>(e.data.rows()) != layout.count())
      throw Error(ErrorCode::ChannelMismatch, "epoch channel count differs from layout");
    if (static_cast<std::size_t>(e.data.cols()) != width)
      throw Error(ErrorCode::InvalidArgument, "epochs have heterogeneous window length");
    if (e.task != task) throw Error(ErrorCode::InvalidArgument, "epochs mix tasks");
    if (!groups.insert(e.group_id).second)
      throw Error(ErrorCode::InvalidArgument,
                  "group id " + std::to_string(e.group_id) + " used by two epochs");
  }
}

}  // namespace eegbci
