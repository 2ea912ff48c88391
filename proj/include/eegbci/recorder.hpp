#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eegbci/synth.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

/// Validates markers as they arrive against a sample stream of known length.
///
/// Markers whose t_sample is earlier than the last accepted one, or outside
/// [0, n_samples], are rejected with a diagnostic. A SessionAbort marker
/// ends ingestion; the trial it interrupted is dropped on finish().
class MarkerIngest {
 public:
  enum class Status { Accepted, Rejected, Aborted, Ignored };

  explicit MarkerIngest(std::int64_t n_samples);

  Status push(const EventMarker& marker);
  /// Parses one NDJSON line. Blank lines are ignored.
  Status push_line(const std::string& line);

  bool aborted() const noexcept { return aborted_; }
  std::size_t rejected() const noexcept { return rejected_; }
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

  /// Accepted markers, minus any trailing trial without a StimulusEnd.
  MarkerLog finish();

 private:
  std::int64_t n_samples_;
  std::int64_t last_t_ = 0;
  std::size_t lines_ = 0;
  std::size_t rejected_ = 0;
  bool aborted_ = false;
  std::vector<EventMarker> markers_;
  std::vector<std::string> diagnostics_;
};

/// Feeds every line of `in` to `ingest`, stopping at SessionAbort.
void ingest_stream(std::istream& in, MarkerIngest& ingest);

/// Sample source used when no recording is replayed: pink background with
/// the configured artifacts, `duration_s` long.
Recording synthetic_source(const SynthConfig& config, double duration_s, std::uint64_t seed);

/// Listening TCP socket that takes a single marker connection.
class MarkerListener {
 public:
  /// Binds and listens. Port 0 picks a free port.
  MarkerListener(const std::string& host, std::uint16_t port);
  ~MarkerListener();
  MarkerListener(const MarkerListener&) = delete;
  MarkerListener& operator=(const MarkerListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }

  /// Accepts one client and ingests newline-delimited markers until the
  /// client closes or sends SessionAbort. timeout_ms < 0 waits forever.
  void serve_one(MarkerIngest& ingest, int timeout_ms = -1);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Client side of the marker protocol: connects and writes one line per
/// marker.
void send_marker_lines(const std::string& host, std::uint16_t port, const std::vector<std::string>& lines);

}  // namespace eegbci
