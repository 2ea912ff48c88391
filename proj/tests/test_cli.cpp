#include <doctest.h>

#include <chrono>
#include <regex>
#include <thread>

#include <json.hpp>

#include "eegbci/eval.hpp"
#include "eegbci/io.hpp"
#include "support.hpp"

using namespace eegbci;
using testing::run_cli;
using testing::slurp;

namespace {

// A two-session SSVEP + motor corpus, synthesized and cleaned once.
struct Fixture {
  testing::TempDir dir{"cli"};
  std::filesystem::path config, raw, clean;
  bool ok = false;

  Fixture() {
    config = dir.path / "small.ini";
    std::ofstream(config) << "[synth]\nsessions = 2\n";
    raw = dir.path / "raw";
    clean = dir.path / "clean";
    const auto cfg = " --config " + config.string() + " --seed 3";
    ok = run_cli("synth --out " + raw.string() + " --task ssvep --task motor-activity" + cfg, dir.path).exit_code == 0 &&
         run_cli("preprocess --corpus " + raw.string() + " --out " + clean.string() + cfg, dir.path).exit_code == 0;
  }
  std::string cfg() const { return " --config " + config.string(); }
};

Fixture& fixture() {
  static Fixture f;
  REQUIRE(f.ok);
  return f;
}

nlohmann::json error_json(const std::string& err) {
  const auto at = err.find("error: ");
  REQUIRE(at != std::string::npos);
  return nlohmann::json::parse(err.substr(at + 7, err.find('\n', at) - at - 7));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth and preprocess write loadable corpora") {
  auto& f = fixture();
  CHECK(std::filesystem::exists(f.raw / "corpus.json"));
  CHECK(std::filesystem::exists(f.clean / "s0_ssvep.bcirec"));
  CHECK(std::filesystem::exists(f.clean / "s1_motor-activity.markers.ndjson"));
  const Recording raw = load_recording(f.raw / "s0_ssvep.bcirec");
  const Recording clean = load_recording(f.clean / "s0_ssvep.bcirec");
  CHECK(raw.n_samples() == 73000);
  CHECK(clean.n_samples() == 71000);
  const auto markers = load_marker_log(f.clean / "s0_ssvep.markers.ndjson");
  CHECK(markers.markers.front().t_sample == 0);
}

TEST_CASE("repeated evaluation is byte identical, serial or parallel") {
  auto& f = fixture();
  const auto a = f.dir.path / "a.json", b = f.dir.path / "b.json", c = f.dir.path / "c.json";
  const std::string base = "evaluate --corpus " + f.clean.string() + " --task ssvep --seed 7" + f.cfg();
  REQUIRE(run_cli(base + " --out " + a.string(), f.dir.path).exit_code == 0);
  REQUIRE(run_cli(base + " --out " + b.string(), f.dir.path).exit_code == 0);
  REQUIRE(run_cli(base + " --serial --out " + c.string(), f.dir.path).exit_code == 0);
  const std::string ra = slurp(a);
  CHECK(!ra.empty());
  CHECK(ra == slurp(b));
  CHECK(ra == slurp(c));
  const EvalReport r = report_from_json(ra);
  CHECK(r.task == Task::Ssvep);
  CHECK(r.seed == 7);
  CHECK(r.n_test_groups == 4);
  CHECK(r.config_hash.size() == 64);
}

TEST_CASE("evaluate all writes one report per run and report renders them") {
  auto& f = fixture();
  const auto dir = f.dir.path / "reports";
  const auto run = run_cli("evaluate --corpus " + f.clean.string() + " --seed 1 --out " + dir.string() + f.cfg(), f.dir.path);
  REQUIRE(run.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "ssvep-spectrogram.json"));
  CHECK(std::filesystem::exists(dir / "motor-activity-csp.json"));
  const auto table = run_cli("report --in " + dir.string(), f.dir.path);
  REQUIRE(table.exit_code == 0);
  CHECK(table.out.find("| SSVEP") != std::string::npos);
  CHECK(table.out.find("| Motor activity") < std::string::npos);
  CHECK(table.out.find("| SSVEP") < table.out.find("| Motor activity"));
}

TEST_CASE("train then evaluate --model reproduces the one-shot report") {
  auto& f = fixture();
  const auto bundle = f.dir.path / "bundle.json";
  const auto one = f.dir.path / "one.json", two = f.dir.path / "two.json";
  const std::string common = " --corpus " + f.clean.string() + " --task motor-activity --seed 5" + f.cfg();
  REQUIRE(run_cli("train" + common + " --out " + bundle.string(), f.dir.path).exit_code == 0);
  REQUIRE(run_cli("evaluate" + common + " --out " + one.string(), f.dir.path).exit_code == 0);
  REQUIRE(run_cli("evaluate --corpus " + f.clean.string() + " --model " + bundle.string() + " --out " + two.string() +
                      f.cfg(),
                  f.dir.path)
              .exit_code == 0);
  CHECK(slurp(one) == slurp(two));

  // A bundle is tied to the config it was trained under.
  const auto other = f.dir.path / "other.ini";
  std::ofstream(other) << "[synth]\nsessions = 2\n[classifiers]\nknn_k = 3\n";
  const auto bad = run_cli("evaluate --corpus " + f.clean.string() + " --model " + bundle.string() + " --out " +
                               (f.dir.path / "x.json").string() + " --config " + other.string(),
                           f.dir.path);
  CHECK(bad.exit_code == 1);
  CHECK(error_json(bad.err)["code"] == "invalid_argument");
}

TEST_CASE("features export csv, metadata and spectrograms") {
  auto& f = fixture();
  const auto out = f.dir.path / "feats";
  REQUIRE(run_cli("features --corpus " + f.clean.string() + " --task ssvep --export-spectrograms --out " + out.string() +
                      f.cfg(),
                  f.dir.path)
              .exit_code == 0);
  const auto meta = nlohmann::json::parse(slurp(out / "features.json"));
  CHECK(meta["format"] == "eegbci-features");
  CHECK(meta["train_groups"].size() == 16);
  const std::string csv = slurp(out / "features.csv");
  CHECK(csv.rfind("group_id,label,side,f0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 20 * 4);
  CHECK(std::filesystem::exists(out / "spectrograms" / "group0.csv"));

  const auto csp = f.dir.path / "feats-csp";
  REQUIRE(run_cli("features --corpus " + f.clean.string() + " --task motor-activity --out " + csp.string() + f.cfg(),
                  f.dir.path)
              .exit_code == 0);
  CHECK(std::filesystem::exists(csp / "csp_filters.csv"));
  CHECK(std::filesystem::exists(csp / "csp_patterns.csv"));
}

TEST_CASE("errors are reported as one JSON line") {
  auto& f = fixture();
  const auto missing = run_cli("evaluate --corpus " + (f.dir.path / "nope").string() + " --out x.json", f.dir.path);
  CHECK(missing.exit_code == 1);
  CHECK(error_json(missing.err)["code"] == "io");

  const auto absent = run_cli("evaluate --corpus " + f.clean.string() + " --task eyes --out " +
                                  (f.dir.path / "e.json").string() + f.cfg(),
                              f.dir.path);
  CHECK(absent.exit_code == 1);
  CHECK(error_json(absent.err)["code"] == "task_absent");

  const auto bad_task = run_cli("train --corpus " + f.clean.string() + " --task juggling --out b.json", f.dir.path);
  CHECK(error_json(bad_task.err)["code"] == "invalid_argument");

  const auto usage = run_cli("evaluate", f.dir.path);
  CHECK(usage.exit_code == 2);
  CHECK(error_json(usage.err)["code"] == "usage");

  const auto again = run_cli("preprocess --corpus " + f.clean.string() + " --out " + (f.dir.path / "twice").string(),
                             f.dir.path);
  CHECK(error_json(again.err)["code"] == "invalid_argument");
}

TEST_CASE("record replays a marker file against a synthetic stream") {
  auto& f = fixture();
  const auto markers = f.dir.path / "live.ndjson";
  {
    std::ofstream m(markers);
    m << R"({"t_sample":100,"task":"MotorImagery","trial":0,"truth":"Yes","phase":"PromptShown"})" << "\n"
      << R"({"t_sample":1100,"task":"MotorImagery","trial":0,"truth":"Yes","phase":"StimulusStart"})" << "\n"
      << R"({"t_sample":6100,"task":"MotorImagery","trial":0,"truth":"Yes","phase":"StimulusEnd"})" << "\n";
  }
  const auto out = f.dir.path / "rec";
  const auto r = run_cli("record --markers-in " + markers.string() + " --synthetic-seconds 8 --out " + out.string(),
                         f.dir.path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("recorded 3 markers, 8000 samples") != std::string::npos);
  CHECK(load_recording(out / "recording.bcirec").n_samples() == 8000);
  CHECK(load_marker_log(out / "markers.ndjson").markers.size() == 3);

  const auto late = f.dir.path / "late.ndjson";
  std::ofstream(late) << R"({"t_sample":9000,"task":"MotorImagery","trial":0,"truth":"Yes","phase":"PromptShown"})"
                      << "\n";
  const auto bad = run_cli("record --markers-in " + late.string() + " --synthetic-seconds 8 --out " +
                               (f.dir.path / "rec2").string(),
                           f.dir.path);
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("diagnostic: marker 1:") != std::string::npos);
  CHECK(error_json(bad.err)["code"] == "protocol");
}

TEST_CASE("record listens on TCP and send-markers feeds it") {
  auto& f = fixture();
  const auto work = f.dir.path / "tcp";
  std::filesystem::create_directories(work);
  const auto src = f.clean / "s0_motor-activity.bcirec";
  const auto out = work / "session";
  testing::RunResult rec;
  std::thread server([&] {
    rec = run_cli("record --listen 127.0.0.1:0 --replay " + src.string() + " --timeout-ms 20000 --out " + out.string(),
                  work);
  });
  int port = 0;
  const std::regex re("listening on 127\\.0\\.0\\.1:(\\d+)");
  for (int i = 0; i < 400 && port == 0; ++i) {
    std::smatch m;
    const std::string text = slurp(work / "stdout.txt");
    if (std::regex_search(text, m, re)) port = std::stoi(m[1]);
    else std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  REQUIRE(port != 0);
  const auto sender_dir = f.dir.path / "sender";
  std::filesystem::create_directories(sender_dir);
  const auto send = run_cli("send-markers --connect 127.0.0.1:" + std::to_string(port) + " --markers-in " +
                                (f.clean / "s0_motor-activity.markers.ndjson").string(),
                            sender_dir);
  server.join();
  CHECK(send.exit_code == 0);
  REQUIRE(rec.exit_code == 0);
  CHECK(load_marker_log(out / "markers.ndjson") == load_marker_log(f.clean / "s0_motor-activity.markers.ndjson"));
  CHECK(load_recording(out / "recording.bcirec").data() == load_recording(src).data());
}

}
