#include "eegbci/corpus.hpp"

#include <fstream>

#include <json.hpp>

#include "eegbci/io.hpp"
#include "eegbci/markers.hpp"

namespace eegbci {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<const SessionData*> Corpus::for_task(Task task) const {
  std::vector<const SessionData*> out;
  for (const auto& s : sessions)
    if (s.task == task) out.push_back(&s);
  return out;
}

std::set<Task> Corpus::tasks() const {
  std::set<Task> out;
  for (const auto& s : sessions) out.insert(s.task);
  return out;
}

Corpus gen_corpus(const SynthConfig& config, const std::optional<std::set<Task>>& only) {
  config.validate();
  Corpus c;
  for (int session = 0; session < config.sessions; ++session)
    for (Task task : kAllTasks)
      if (!only || only->count(task)) c.sessions.push_back(gen_session(config, task, session));
  return c;
}

namespace {

std::string stem(const SessionData& s) {
  return "s" + std::to_string(s.session) + "_" + std::string(short_name(s.task));
}

}  // namespace

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + dir.string() + ": " + ec.message());
  json manifest;
  manifest["format"] = "eegbci-corpus";
  manifest["version"] = 1;
  manifest["preprocessed"] = corpus.preprocessed;
  manifest["config_hash"] = corpus.config_hash;
  manifest["recordings"] = json::array();
  for (const auto& s : corpus.sessions) {
    const std::string base = stem(s);
    save_recording(s.recording, dir / (base + ".bcirec"));
    save_marker_log(s.markers, dir / (base + ".markers.ndjson"));
    manifest["recordings"].push_back({{"session", s.session},
                                      {"task", std::string(to_string(s.task))},
                                      {"recording", base + ".bcirec"},
                                      {"markers", base + ".markers.ndjson"}});
  }
  std::ofstream out(dir / "corpus.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / "corpus.json").string());
  out << manifest.dump(2) << '\n';
}

Corpus load_corpus(const fs::path& dir, const std::optional<std::set<Task>>& only) {
  const fs::path path = dir / "corpus.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Corpus c;
  try {
    const json manifest = json::parse(in);
    if (manifest.at("format") != "eegbci-corpus") throw Error(ErrorCode::Format, path.string() + " is not a corpus manifest");
    c.preprocessed = manifest.at("preprocessed").get<bool>();
    c.config_hash = manifest.value("config_hash", "");
    for (const auto& item : manifest.at("recordings")) {
      const Task task = parse_task(item.at("task").get<std::string>());
      if (only && !only->count(task)) continue;
      Recording rec = load_recording(dir / item.at("recording").get<std::string>());
      MarkerLog log = load_marker_log(dir / item.at("markers").get<std::string>());
      validate_marker_log(log, rec.n_samples());
      c.sessions.push_back({item.at("session").get<int>(), task, std::move(rec), std::move(log)});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, "malformed corpus manifest " + path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace eegbci
