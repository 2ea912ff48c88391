#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "eegbci/types.hpp"

namespace eegbci {

/// Native recording format:
///
///   BCIREC1 {"layout":[...],"meta":{...},"n_samples":N,"rate_hz":R}\n
///   <float32 little-endian samples, channel-major>
///
/// Samples are stored at float32 precision; values that are exactly
/// representable as float32 survive a load/save round trip bit-for-bit.
Recording load_recording(const std::filesystem::path& path);
void save_recording(const Recording& rec, const std::filesystem::path& path);

Recording read_recording(std::istream& in, const std::string& source_name = "<stream>");
void write_recording(const Recording& rec, std::ostream& out);

/// CSV import for hand-made fixtures: a header row of channel names, then one
/// row per sample. The sample rate is not part of the CSV and must be given.
Recording import_csv(const std::filesystem::path& path, double rate_hz);

/// Marker sidecar: newline-delimited JSON objects with the fields
/// t_sample, task, trial, truth, phase.
MarkerLog load_marker_log(const std::filesystem::path& path);
void save_marker_log(const MarkerLog& log, const std::filesystem::path& path);

EventMarker parse_marker_line(const std::string& line);
std::string format_marker_line(const EventMarker& marker);

}  // namespace eegbci
