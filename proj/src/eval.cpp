#include "eegbci/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eegbci/groups.hpp"
#include "eegbci/random.hpp"

namespace eegbci {

using nlohmann::json;

std::string_view to_string(FeatureMode mode) {
  return mode == FeatureMode::Spectrogram ? "spectrogram" : "csp";
}

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "spectrogram") return FeatureMode::Spectrogram;
  if (text == "csp") return FeatureMode::Csp;
  throw Error(ErrorCode::InvalidArgument, "unknown feature mode '" + std::string(text) + "'");
}

EvalReport evaluate(const TrainedModel& model, const FeatureMatrix& test) {
  test.validate();
  if (test.n_rows() == 0) throw Error(ErrorCode::EmptyTestSet, "test set is empty");
  require_disjoint(model.fit_groups, test.group_ids, "evaluate");

  const auto pred = predict(model, test.rows);
  const auto votes = majority_vote(pred, test.group_ids);
  std::map<int, Label> truth;
  for (std::size_t i = 0; i < test.n_rows(); ++i) {
    auto [it, fresh] = truth.emplace(test.group_ids[i], test.labels[i]);
    if (!fresh && it->second != test.labels[i])
      throw Error(ErrorCode::InvalidArgument, "group " + std::to_string(it->first) + " carries both labels");
  }

  EvalReport r;
  r.family = model.family;
  std::size_t hit_windows = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit_windows += pred[i] == test.labels[i];
  r.test_window_acc = static_cast<double>(hit_windows) / static_cast<double>(pred.size());

  std::size_t hit = 0, yes = 0;
  for (const auto& [g, p] : votes) {
    const Label t = truth.at(g);
    ++r.confusion[t == Label::Yes ? 0 : 1][p == Label::Yes ? 0 : 1];
    hit += p == t;
    yes += t == Label::Yes;
  }
  const auto n = static_cast<double>(votes.size());
  r.n_test_groups = votes.size();
  r.test_acc = static_cast<double>(hit) / n;
  r.nir = static_cast<double>(std::max(yes, votes.size() - yes)) / n;
  return r;
}

std::string report_to_json(const EvalReport& r) {
  json j;
  j["format"] = "eegbci-report";
  j["version"] = 1;
  j["task"] = std::string(to_string(r.task));
  j["feature_mode"] = std::string(to_string(r.feature_mode));
  j["family"] = std::string(to_string(r.family));
  j["train_acc"] = r.train_acc;
  j["cv_acc"] = r.cv_acc;
  j["test_acc"] = r.test_acc;
  j["test_window_acc"] = r.test_window_acc;
  j["nir"] = r.nir;
  j["confusion"] = {{r.confusion[0][0], r.confusion[0][1]}, {r.confusion[1][0], r.confusion[1][1]}};
  j["n_train_groups"] = r.n_train_groups;
  j["n_test_groups"] = r.n_test_groups;
  j["seed"] = r.seed;
  json cv = json::object();
  for (std::size_t f = 0; f < kAllFamilies.size(); ++f) cv[std::string(to_string(kAllFamilies[f]))] = r.family_cv[f];
  j["family_cv"] = cv;
  j["config_hash"] = r.config_hash;
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "eegbci-report") throw Error(ErrorCode::Format, "not an eegbci report");
    EvalReport r;
    r.task = parse_task(j.at("task").get<std::string>());
    r.feature_mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
    r.family = parse_family(j.at("family").get<std::string>());
    r.train_acc = j.at("train_acc").get<double>();
    r.cv_acc = j.at("cv_acc").get<double>();
    r.test_acc = j.at("test_acc").get<double>();
    r.test_window_acc = j.at("test_window_acc").get<double>();
    r.nir = j.at("nir").get<double>();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) r.confusion[a][b] = j.at("confusion").at(a).at(b).get<int>();
    r.n_train_groups = j.at("n_train_groups").get<std::size_t>();
    r.n_test_groups = j.at("n_test_groups").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (std::size_t f = 0; f < kAllFamilies.size(); ++f)
      r.family_cv[f] = j.at("family_cv").at(std::string(to_string(kAllFamilies[f]))).get<double>();
    r.config_hash = j.at("config_hash").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("malformed report: ") + e.what());
  }
}

std::string table_row_name(Task task, FeatureMode mode) {
  switch (task) {
    case Task::EyesOpenClosed: return "Eyes open/closed";
    case Task::Ssvep: return "SSVEP";
    case Task::MotorActivity: return "Motor activity";
    case Task::MotorImagery: return "Motor imagery";
    case Task::LaryngealActivity:
      return mode == FeatureMode::Csp ? "Laryngeal activity (CSP)" : "Laryngeal activity (Spectrogram)";
    case Task::LaryngealImagery:
      return mode == FeatureMode::Csp ? "Laryngeal imagery (CSP)" : "Laryngeal imagery (Spectrogram)";
  }
  return "?";
}

namespace {

int row_rank(const EvalReport& r) {
  switch (r.task) {
    case Task::Ssvep: return 0;
    case Task::MotorActivity: return 1;
    case Task::MotorImagery: return 2;
    case Task::LaryngealActivity: return r.feature_mode == FeatureMode::Csp ? 3 : 5;
    case Task::LaryngealImagery: return r.feature_mode == FeatureMode::Csp ? 4 : 6;
    case Task::EyesOpenClosed: return 7;
  }
  return 8;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

}  // namespace

std::string render_table(std::vector<EvalReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EvalReport& a, const EvalReport& b) { return row_rank(a) < row_rank(b); });

  const std::vector<std::string> head{"Task", "Model", "Train set accuracy (%)", "Test set accuracy (%)",
                                      "NIR (%)"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports)
    rows.push_back({table_row_name(r.task, r.feature_mode), std::string(display_name(r.family)), pct(r.cv_acc),
                    pct(r.test_acc), pct(r.nir)});

  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c == 0 ? "| " : " | ") << cells[c] << std::string(width[c] - cells[c].size(), ' ');
    }
    out << " |\n";
  };
  auto rule = [&] {
    for (std::size_t c = 0; c < width.size(); ++c) out << (c == 0 ? "|-" : "-|-") << std::string(width[c], '-');
    out << "-|\n";
  };
  line(head);
  rule();
  for (const auto& row : rows) line(row);
  return out.str();
}

EpochSet permute_labels(const EpochSet& set, std::uint64_t seed) {
  std::vector<Label> labels;
  for (const auto& e : set.epochs) labels.push_back(e.label);
  Rng rng(derive_seed(seed, "permute-labels"));
  rng.shuffle(labels);
  EpochSet out = set;
  for (std::size_t i = 0; i < out.epochs.size(); ++i) out.epochs[i].label = labels[i];
  return out;
}

}  // namespace eegbci
