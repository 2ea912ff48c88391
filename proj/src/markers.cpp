#include <limits>
#include <fstream>

#include <json.hpp>

#include "eegbci/io.hpp"
#include "eegbci/markers.hpp"

namespace eegbci {

EventMarker parse_marker_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Protocol, std::string("marker is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Protocol, "marker must be a JSON object");
  EventMarker m;
  try {
    m.t_sample = j.at("t_sample").get<std::int64_t>();
    m.task = parse_task(j.at("task").get<std::string>());
    m.trial = j.at("trial").get<int>();
    m.truth = parse_label(j.at("truth").get<std::string>());
    m.phase = parse_phase(j.at("phase").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Protocol, std::string("marker field error: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::Protocol, e.what());
  }
  return m;
}

std::string format_marker_line(const EventMarker& m) {
  nlohmann::json j;
  j["t_sample"] = m.t_sample;
  j["task"] = std::string(to_string(m.task));
  j["trial"] = m.trial;
  j["truth"] = std::string(to_string(m.truth));
  j["phase"] = std::string(to_string(m.phase));
  return j.dump();
}

MarkerLog load_marker_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  MarkerLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    try {
      log.markers.push_back(parse_marker_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

void save_marker_log(const MarkerLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const auto& m : log.markers) out << format_marker_line(m) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

MarkerLog shift_markers(const MarkerLog& log, std::int64_t offset_samples) {
  MarkerLog out;
  out.markers.reserve(log.markers.size());
  for (auto m : log.markers) {
    m.t_sample -= offset_samples;
    if (m.t_sample >= 0) out.markers.push_back(m);
  }
  return out;
}

void validate_marker_log(const MarkerLog& log, std::size_t n_samples) {
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  const EventMarker* open = nullptr;
  for (const auto& m : log.markers) {
    if (m.t_sample < prev)
      throw Error(ErrorCode::Protocol, "marker timestamps out of order at t_sample " +
                                           std::to_string(m.t_sample));
    prev = m.t_sample;
    if (m.t_sample < 0 || static_cast<std::uint64_t>(m.t_sample) > n_samples)
      throw Error(ErrorCode::OutOfRange, "marker at t_sample " + std::to_string(m.t_sample) +
                                             " outside recording of " + std::to_string(n_samples) +
                                             " samples");
    if (m.phase == Phase::StimulusStart) {
      if (open) throw Error(ErrorCode::Protocol, "StimulusStart while previous stimulus still open");
      open = &m;
    } else if (m.phase == Phase::StimulusEnd) {
      if (!open || open->task != m.task || open->trial != m.trial)
        throw Error(ErrorCode::Protocol, "StimulusEnd without matching StimulusStart (trial " +
                                             std::to_string(m.trial) + ")");
      open = nullptr;
    }
  }
  if (open)
    throw Error(ErrorCode::Protocol,
                "StimulusStart of trial " + std::to_string(open->trial) + " never ended");
}

bool has_task(const MarkerLog& log, Task task) {
  for (const auto& m : log.markers)
    if (m.task == task && m.phase == Phase::StimulusStart) return true;
  return false;
}

}  // namespace eegbci
