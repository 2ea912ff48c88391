#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eegbci/synth.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

/// Recordings plus marker logs, one pair per (session, task).
struct Corpus {
  std::vector<SessionData> sessions;
  /// True once clean_pipeline has been applied and markers shifted.
  bool preprocessed = false;
  std::string config_hash;

  std::vector<const SessionData*> for_task(Task task) const;
  std::set<Task> tasks() const;
};

/// Full synthetic corpus; `only` restricts the generated tasks.
Corpus gen_corpus(const SynthConfig& config, const std::optional<std::set<Task>>& only = std::nullopt);

/// Writes corpus.json plus s<session>_<task>.bcirec / .markers.ndjson files.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir, const std::optional<std::set<Task>>& only = std::nullopt);

}  // namespace eegbci
