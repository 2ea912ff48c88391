#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "eegbci/error.hpp"

namespace eegbci {

/// Channels x samples, row-major so each channel is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Label : std::uint8_t { Yes, No };

enum class Task : std::uint8_t {
  EyesOpenClosed,
  Ssvep,
  MotorActivity,
  MotorImagery,
  LaryngealActivity,
  LaryngealImagery,
};

/// SessionAbort is only produced by the protocol runner when the participant
/// ends the session early; it never appears inside a trial.
enum class Phase : std::uint8_t {
  PromptShown,
  ResponseKey,
  StimulusStart,
  StimulusEnd,
  SessionAbort,
};

inline constexpr Task kAllTasks[] = {
    Task::EyesOpenClosed,    Task::Ssvep,           Task::MotorActivity,
    Task::MotorImagery,      Task::LaryngealActivity, Task::LaryngealImagery,
};

std::string_view to_string(Label label);
std::string_view to_string(Task task);
std::string_view to_string(Phase phase);

Label parse_label(std::string_view text);
/// Accepts the canonical enum spelling ("LaryngealImagery") and the short CLI
/// spelling ("laryngeal-imagery", "ssvep", "eyes").
Task parse_task(std::string_view text);
Phase parse_phase(std::string_view text);

/// Short kebab-case name used for file names and CLI flags.
std::string_view short_name(Task task);

inline Label opposite(Label label) { return label == Label::Yes ? Label::No : Label::Yes; }

class ChannelLayout {
 public:
  /// The 16-electrode 10-20 montage of the recording headset.
  static ChannelLayout standard16();

  ChannelLayout() = default;
  explicit ChannelLayout(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t count() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ErrorCode::InvalidArgument for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& names) const;

  bool operator==(const ChannelLayout&) const = default;

 private:
  std::vector<std::string> names_;
};

using Metadata = std::map<std::string, std::string>;

/// Immutable multichannel recording. Construction validates the shape,
/// sample rate and finiteness invariants.
class Recording {
 public:
  Recording(Matrix data, double rate_hz, ChannelLayout layout, Metadata meta = {});

  const Matrix& data() const noexcept { return data_; }
  double rate_hz() const noexcept { return rate_hz_; }
  const ChannelLayout& layout() const noexcept { return layout_; }
  const Metadata& meta() const noexcept { return meta_; }

  std::size_t n_channels() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t n_samples() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  double duration_s() const noexcept { return static_cast<double>(n_samples()) / rate_hz_; }

  Recording with_data(Matrix data) const { return Recording(std::move(data), rate_hz_, layout_, meta_); }
  Recording with_meta(std::string key, std::string value) const;

 private:
  Matrix data_;
  double rate_hz_;
  ChannelLayout layout_;
  Metadata meta_;
};

struct EventMarker {
  std::int64_t t_sample = 0;
  Task task = Task::Ssvep;
  int trial = 0;
  Label truth = Label::Yes;
  Phase phase = Phase::PromptShown;

  bool operator==(const EventMarker&) const = default;
};

struct MarkerLog {
  std::vector<EventMarker> markers;

  bool operator==(const MarkerLog&) const = default;
};

struct Epoch {
  Matrix data;
  Label label = Label::Yes;
  int group_id = 0;
  Task task = Task::Ssvep;
};

struct EpochSet {
  std::vector<Epoch> epochs;
  double rate_hz = 0.0;
  ChannelLayout layout;
  Task task = Task::Ssvep;

  std::size_t size() const noexcept { return epochs.size(); }
  std::size_t window_samples() const noexcept {
    return epochs.empty() ? 0 : static_cast<std::size_t>(epochs.front().data.cols());
  }
  /// Checks homogeneity and group-id uniqueness; throws on violation.
  void validate() const;
};

}  // namespace eegbci
