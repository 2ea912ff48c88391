// eegbci: batch workflow and marker recorder.
//
//   eegbci synth      --out corpus/ --seed 1
//   eegbci preprocess --corpus corpus/ --out clean/
//   eegbci features   --corpus clean/ --task ssvep --feature-mode spectrogram --out feats/
//   eegbci train      --corpus clean/ --task motor-activity --feature-mode csp --out model.json
//   eegbci evaluate   --corpus clean/ --task all --seed 7 --out reports/
//   eegbci report     --in reports/ --out table.txt
//   eegbci record     --listen 127.0.0.1:5555 --replay rec.bcirec --out session/
//
// Failures print one line `error: {"code":...,"message":...}` on stderr and
// exit nonzero.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eegbci/config.hpp"
#include "eegbci/corpus.hpp"
#include "eegbci/io.hpp"
#include "eegbci/markers.hpp"
#include "eegbci/pipeline.hpp"
#include "eegbci/random.hpp"
#include "eegbci/recorder.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eegbci;

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool serial = false;

  ToolConfig load() const {
    ToolConfig c = config_path.empty() ? ToolConfig{} : load_config(config_path);
    c.synth.seed = seed;
    c.pipeline.exec = serial ? kernels::Exec::Serial : kernels::Exec::Parallel;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "INI config file");
  cmd->add_option("--seed", c.seed, "Seed for generation, splits and models");
  cmd->add_flag("--serial", c.serial, "Use the serial reference kernels");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Corpus open_corpus(const std::string& dir, const std::optional<std::set<Task>>& only = std::nullopt) {
  if (!fs::exists(fs::path(dir) / "corpus.json"))
    throw Error(ErrorCode::Io, "corpus not found: " + (fs::path(dir) / "corpus.json").string());
  return load_corpus(dir, only);
}

std::vector<std::pair<Task, FeatureMode>> resolve_runs(const std::string& task_arg, const std::string& mode_arg,
                                                       const Corpus& corpus) {
  std::vector<std::pair<Task, FeatureMode>> runs;
  std::vector<Task> tasks;
  if (task_arg == "all") {
    const auto present = corpus.tasks();
    tasks.assign(present.begin(), present.end());
  } else {
    tasks.push_back(parse_task(task_arg));
  }
  for (Task t : tasks) {
    if (mode_arg.empty() || mode_arg == "default") {
      for (FeatureMode m : default_modes(t)) runs.emplace_back(t, m);
    } else {
      runs.emplace_back(t, parse_feature_mode(mode_arg));
    }
  }
  return runs;
}

std::string run_stem(Task task, FeatureMode mode) {
  return std::string(short_name(task)) + "-" + std::string(to_string(mode));
}

// ---------------------------------------------------------------------------

int cmd_synth(const Common& common, const std::string& out, const std::vector<std::string>& tasks) {
  const ToolConfig cfg = common.load();
  std::optional<std::set<Task>> only;
  if (!tasks.empty()) {
    only.emplace();
    for (const auto& t : tasks) only->insert(parse_task(t));
  }
  Corpus c = gen_corpus(cfg.synth, only);
  c.config_hash = config_hash(cfg);
  save_corpus(c, out);
  std::cout << "wrote " << c.sessions.size() << " recordings to " << out << "\n";
  return 0;
}

int cmd_preprocess(const Common& common, const std::string& in, const std::string& out) {
  const ToolConfig cfg = common.load();
  Corpus c = open_corpus(in);
  if (c.preprocessed) throw Error(ErrorCode::InvalidArgument, in + " is already preprocessed");
  for (auto& s : c.sessions) {
    const auto offset = trim_offset(s.recording, cfg.pipeline.preprocess.trim_s);
    s.recording = clean_pipeline(s.recording, cfg.pipeline.preprocess, cfg.pipeline.exec)
                      .with_meta("preprocess_config", config_hash(cfg));
    s.markers = shift_markers(s.markers, offset);
  }
  c.preprocessed = true;
  c.config_hash = config_hash(cfg);
  save_corpus(c, out);
  std::cout << "preprocessed " << c.sessions.size() << " recordings into " << out << "\n";
  return 0;
}

void write_feature_csv(const fs::path& path, const FeatureMatrix& train, const FeatureMatrix& test) {
  std::ostringstream out;
  out.precision(17);
  out << "group_id,label,side";
  for (std::size_t j = 0; j < train.n_features(); ++j) out << ",f" << j;
  out << '\n';
  for (const auto* side : {&train, &test}) {
    for (std::size_t i = 0; i < side->n_rows(); ++i) {
      out << side->group_ids[i] << ',' << to_string(side->labels[i]) << ',' << (side == &train ? "train" : "test");
      for (std::size_t j = 0; j < side->n_features(); ++j) out << ',' << side->rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out << '\n';
    }
  }
  write_text(path, out.str());
}

int cmd_features(const Common& common, const std::string& corpus_dir, const std::string& task_arg,
                 const std::string& mode_arg, const std::string& out_dir, bool export_spectrograms) {
  const ToolConfig cfg = common.load();
  const Task task = parse_task(task_arg);
  const FeatureMode mode = mode_arg.empty() ? default_modes(task).front() : parse_feature_mode(mode_arg);
  const Corpus corpus = open_corpus(corpus_dir, std::set<Task>{task});
  const EpochSet epochs = prepare_task_epochs(corpus, task, cfg.pipeline);

  std::vector<GroupInfo> info;
  for (const auto& e : epochs.epochs) info.push_back({e.group_id, e.label});
  const GroupSplit split = group_split(info, cfg.pipeline.train_ratio, derive_seed(common.seed, "split"));

  const fs::path out(out_dir);
  const std::string hash = config_hash(cfg);
  json meta{{"format", "eegbci-features"}, {"version", 1},           {"task", std::string(to_string(task))},
            {"feature_mode", std::string(to_string(mode))},         {"seed", common.seed},
            {"config_hash", hash},    {"train_groups", split.train_groups}, {"test_groups", split.test_groups}};

  if (mode == FeatureMode::Spectrogram) {
    const FeatureMatrix all = spectrogram_features(epochs, cfg.pipeline);
    write_feature_csv(out / "features.csv", all.select_groups(split.train_groups), all.select_groups(split.test_groups));
    meta["channels"] = spectrogram_channels(task, epochs.layout);
    if (export_spectrograms) {
      const auto channels = spectrogram_channels(task, epochs.layout);
      for (const auto& e : epochs.epochs) {
        std::ostringstream csv;
        write_spectrogram_csv(spectrogram(e, epochs.rate_hz, epochs.layout, channels, cfg.pipeline.spectrogram,
                                          cfg.pipeline.exec),
                              csv);
        write_text(out / "spectrograms" / ("group" + std::to_string(e.group_id) + ".csv"), csv.str());
      }
    }
  } else {
    const CspFeaturizer featurize(epochs, cfg.pipeline);
    const auto r = featurize(split.train_groups, split.test_groups);
    write_feature_csv(out / "features.csv", r.fit, r.score);
    std::ostringstream filters, patterns;
    write_csp_matrix_csv(r.model, false, filters);
    write_csp_matrix_csv(r.model, true, patterns);
    write_text(out / "csp_filters.csv", filters.str());
    write_text(out / "csp_patterns.csv", patterns.str());
    meta["csp"] = json::parse(csp_model_to_json(r.model));
  }
  write_text(out / "features.json", meta.dump(2) + "\n");
  std::cout << "wrote features to " << out_dir << "\n";
  return 0;
}

json train_bundle(const ToolConfig& cfg, std::uint64_t seed, Task task, FeatureMode mode, const PipelineResult& r) {
  json b{{"format", "eegbci-bundle"},
         {"version", 1},
         {"config_hash", config_hash(cfg)},
         {"task", std::string(to_string(task))},
         {"feature_mode", std::string(to_string(mode))},
         {"seed", seed},
         {"train_groups", r.split.train_groups},
         {"test_groups", r.split.test_groups},
         {"family", std::string(to_string(r.selection.family))},
         {"cv_acc", r.selection.cv_accuracy},
         {"model", json::parse(model_to_json(r.selection.model))}};
  json cv = json::object();
  for (std::size_t f = 0; f < kAllFamilies.size(); ++f)
    cv[std::string(to_string(kAllFamilies[f]))] = r.selection.family_cv[f];
  b["family_cv"] = cv;
  b["csp"] = r.csp ? json::parse(csp_model_to_json(*r.csp)) : json(nullptr);
  return b;
}

int cmd_train(const Common& common, const std::string& corpus_dir, const std::string& task_arg,
              const std::string& mode_arg, const std::string& out) {
  const ToolConfig cfg = common.load();
  const Task task = parse_task(task_arg);
  const FeatureMode mode = mode_arg.empty() ? default_modes(task).front() : parse_feature_mode(mode_arg);
  const Corpus corpus = open_corpus(corpus_dir, std::set<Task>{task});
  const EpochSet epochs = prepare_task_epochs(corpus, task, cfg.pipeline);
  const PipelineResult r = run_epoch_pipeline(epochs, mode, common.seed, cfg.pipeline);
  write_text(out, train_bundle(cfg, common.seed, task, mode, r).dump(2) + "\n");
  std::cout << to_string(task) << " " << to_string(mode) << ": " << display_name(r.selection.family)
            << ", cv accuracy " << r.selection.cv_accuracy << "\n";
  return 0;
}

/// Scores a saved bundle on its recorded test groups.
EvalReport evaluate_bundle(const ToolConfig& cfg, const json& bundle, const Corpus& corpus) {
  if (bundle.at("format") != "eegbci-bundle") throw Error(ErrorCode::Format, "not a model bundle");
  const Task task = parse_task(bundle.at("task").get<std::string>());
  const FeatureMode mode = parse_feature_mode(bundle.at("feature_mode").get<std::string>());
  const TrainedModel model = model_from_json(bundle.at("model").dump());
  const auto train_groups = bundle.at("train_groups").get<std::vector<int>>();
  const auto test_groups = bundle.at("test_groups").get<std::vector<int>>();

  const EpochSet epochs = prepare_task_epochs(corpus, task, cfg.pipeline);
  FeatureMatrix all;
  if (mode == FeatureMode::Spectrogram) {
    all = spectrogram_features(epochs, cfg.pipeline);
  } else {
    const CspModel csp = csp_model_from_json(bundle.at("csp").dump());
    require_disjoint(csp.fit_groups, test_groups, "CSP model");
    std::vector<const Epoch*> ptrs;
    for (const auto& e : epochs.epochs) {
      ptrs.push_back(&e);
      all.labels.push_back(e.label);
      all.group_ids.push_back(e.group_id);
    }
    all.rows = apply_csp(csp, ptrs, epochs.layout, cfg.pipeline.exec);
  }
  EvalReport r = evaluate(model, all.select_groups(test_groups));
  r.task = task;
  r.feature_mode = mode;
  r.train_acc = group_accuracy(model, all.select_groups(train_groups));
  r.cv_acc = bundle.at("cv_acc").get<double>();
  for (std::size_t f = 0; f < kAllFamilies.size(); ++f)
    r.family_cv[f] = bundle.at("family_cv").at(std::string(to_string(kAllFamilies[f]))).get<double>();
  r.n_train_groups = train_groups.size();
  r.seed = bundle.at("seed").get<std::uint64_t>();
  return r;
}

int cmd_evaluate(const Common& common, const std::string& corpus_dir, const std::string& task_arg,
                 const std::string& mode_arg, const std::string& model_path, const std::string& out) {
  const ToolConfig cfg = common.load();
  const std::string hash = config_hash(cfg);

  if (!model_path.empty()) {
    const json bundle = json::parse(read_text(model_path));
    if (bundle.value("config_hash", "") != hash)
      throw Error(ErrorCode::InvalidArgument, "model " + model_path + " was trained under a different config");
    const Corpus corpus = open_corpus(corpus_dir);
    EvalReport r = evaluate_bundle(cfg, bundle, corpus);
    r.config_hash = hash;
    write_text(out, report_to_json(r));
    std::cout << table_row_name(r.task, r.feature_mode) << ": test accuracy " << r.test_acc << "\n";
    return 0;
  }

  const Corpus corpus = open_corpus(corpus_dir);
  const auto runs = resolve_runs(task_arg, mode_arg, corpus);
  const bool many = runs.size() > 1 || task_arg == "all";
  for (const auto& [task, mode] : runs) {
    EvalReport r = run_task_pipeline(corpus, task, mode, common.seed, cfg.pipeline);
    r.config_hash = hash;
    const fs::path target = many ? fs::path(out) / (run_stem(task, mode) + ".json") : fs::path(out);
    write_text(target, report_to_json(r));
    std::cout << table_row_name(task, mode) << ": " << display_name(r.family) << ", test accuracy " << r.test_acc
              << "\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& entry : fs::directory_iterator(in))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    } else if (fs::exists(in)) {
      files.emplace_back(in);
    } else {
      throw Error(ErrorCode::Io, "report input not found: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<EvalReport> reports;
  for (const auto& f : files) {
    try {
      reports.push_back(report_from_json(read_text(f)));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.what());
    }
  }
  if (reports.empty()) throw Error(ErrorCode::InvalidArgument, "no reports found");
  const std::string table = render_table(reports);
  if (out.empty())
    std::cout << table;
  else
    write_text(out, table);
  return 0;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "endpoint must be HOST:PORT, got " + text);
  const int port = std::stoi(text.substr(colon + 1));
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range: " + text);
  return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

struct RecordArgs {
  std::string listen;
  std::string markers_in;
  std::string replay;
  double synthetic_seconds = 0.0;
  std::string out;
  int timeout_ms = -1;
};

int cmd_record(const Common& common, const RecordArgs& a) {
  const ToolConfig cfg = common.load();
  if (a.listen.empty() == a.markers_in.empty())
    throw Error(ErrorCode::InvalidArgument, "record needs exactly one of --listen or --markers-in");
  if (a.replay.empty() == (a.synthetic_seconds <= 0.0))
    throw Error(ErrorCode::InvalidArgument, "record needs exactly one of --replay or --synthetic-seconds");

  const Recording source = a.replay.empty() ? synthetic_source(cfg.synth, a.synthetic_seconds, common.seed)
                                            : load_recording(a.replay);
  MarkerIngest ingest(static_cast<std::int64_t>(source.n_samples()));
  if (!a.markers_in.empty()) {
    std::ifstream in(a.markers_in);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + a.markers_in);
    ingest_stream(in, ingest);
  } else {
    const auto [host, port] = parse_endpoint(a.listen);
    MarkerListener listener(host, port);
    std::cout << "listening on " << host << ":" << listener.port() << std::endl;
    listener.serve_one(ingest, a.timeout_ms);
  }
  const MarkerLog log = ingest.finish();
  validate_marker_log(log, source.n_samples());

  const fs::path out(a.out);
  fs::create_directories(out);
  save_recording(source.with_meta("recorded_config", config_hash(cfg)), out / "recording.bcirec");
  save_marker_log(log, out / "markers.ndjson");
  for (const auto& d : ingest.diagnostics()) std::cerr << "diagnostic: " << d << "\n";
  std::cout << "recorded " << log.markers.size() << " markers, " << source.n_samples() << " samples"
            << (ingest.aborted() ? " (session aborted)" : "") << "\n";
  if (ingest.rejected() > 0)
    throw Error(ErrorCode::Protocol, std::to_string(ingest.rejected()) + " marker(s) rejected");
  return 0;
}

int cmd_send_markers(const std::string& connect, const std::string& markers_in) {
  const auto [host, port] = parse_endpoint(connect);
  std::ifstream in(markers_in);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + markers_in);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  send_marker_lines(host, port, lines);
  return 0;
}

void print_error(std::string_view code, const std::string& message) {
  std::cerr << "error: " << json{{"code", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline EEG BCI toolkit"};
  app.require_subcommand(1);

  Common common;
  std::string out, corpus_dir, task = "all", mode, model_path;
  std::vector<std::string> tasks, inputs;
  bool export_spectrograms = false;
  RecordArgs rec;
  std::string connect;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_common(synth, common);
  synth->add_option("--out", out, "Output corpus directory")->required();
  synth->add_option("--task", tasks, "Restrict to these tasks (repeatable)");

  auto* pre = app.add_subcommand("preprocess", "Trim, filter and standardize every recording");
  add_common(pre, common);
  pre->add_option("--corpus", corpus_dir, "Input corpus directory")->required();
  pre->add_option("--out", out, "Output corpus directory")->required();

  auto* feat = app.add_subcommand("features", "Export features of one task");
  add_common(feat, common);
  feat->add_option("--corpus", corpus_dir)->required();
  feat->add_option("--task", task)->required();
  feat->add_option("--feature-mode", mode, "spectrogram or csp");
  feat->add_option("--out", out, "Output directory")->required();
  feat->add_flag("--export-spectrograms", export_spectrograms, "Also write one spectrogram CSV per epoch");

  auto* train = app.add_subcommand("train", "Select and fit a model for one task");
  add_common(train, common);
  train->add_option("--corpus", corpus_dir)->required();
  train->add_option("--task", task)->required();
  train->add_option("--feature-mode", mode);
  train->add_option("--out", out, "Model bundle path")->required();

  auto* eval = app.add_subcommand("evaluate", "Run the full pipeline and write reports");
  add_common(eval, common);
  eval->add_option("--corpus", corpus_dir)->required();
  eval->add_option("--task", task, "Task name or 'all'");
  eval->add_option("--feature-mode", mode, "spectrogram, csp or default");
  eval->add_option("--model", model_path, "Score a bundle from `train` instead of retraining");
  eval->add_option("--out", out, "Report file, or directory when several runs")->required();

  auto* report = app.add_subcommand("report", "Render the summary table from report files");
  report->add_option("--in", inputs, "Report files or directories")->required();
  report->add_option("--out", out, "Output text file (default stdout)");

  auto* record = app.add_subcommand("record", "Ingest markers against a sample stream");
  add_common(record, common);
  record->add_option("--listen", rec.listen, "HOST:PORT for the marker connection");
  record->add_option("--markers-in", rec.markers_in, "Replay markers from an NDJSON file");
  record->add_option("--replay", rec.replay, "Replay samples from a recording");
  record->add_option("--synthetic-seconds", rec.synthetic_seconds, "Synthetic live source length");
  record->add_option("--timeout-ms", rec.timeout_ms, "Give up waiting for a client");
  record->add_option("--out", rec.out, "Output directory")->required();

  auto* send = app.add_subcommand("send-markers", "Stream a marker file to a recorder");
  send->add_option("--connect", connect, "HOST:PORT")->required();
  send->add_option("--markers-in", rec.markers_in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*synth) return cmd_synth(common, out, tasks);
    if (*pre) return cmd_preprocess(common, corpus_dir, out);
    if (*feat) return cmd_features(common, corpus_dir, task, mode, out, export_spectrograms);
    if (*train) return cmd_train(common, corpus_dir, task, mode, out);
    if (*eval) return cmd_evaluate(common, corpus_dir, task, mode, model_path, out);
    if (*report) return cmd_report(inputs, out);
    if (*record) return cmd_record(common, rec);
    if (*send) return cmd_send_markers(connect, rec.markers_in);
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 1;
}
