#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eegbci/classifiers.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

enum class FeatureMode : std::uint8_t { Spectrogram, Csp };

std::string_view to_string(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view text);

struct EvalReport {
  Task task = Task::Ssvep;
  FeatureMode feature_mode = FeatureMode::Spectrogram;
  Family family = Family::LogRegL2;
  /// Resubstitution accuracy of the final model on its training groups.
  double train_acc = 0.0;
  /// Mean group-CV accuracy of the selected family.
  double cv_acc = 0.0;
  double test_acc = 0.0;
  double test_window_acc = 0.0;
  /// Majority-class share of the test groups.
  double nir = 0.0;
  /// confusion[truth][predicted], index 0 == Yes.
  std::array<std::array<int, 2>, 2> confusion{};
  std::size_t n_train_groups = 0;
  std::size_t n_test_groups = 0;
  std::uint64_t seed = 0;
  std::array<double, kAllFamilies.size()> family_cv{};
  std::string config_hash;
};

/// Scores `model` on held-out rows. Window predictions are reduced to one
/// vote per group (ties -> Yes). Throws ErrorCode::Leakage if any test group
/// was among the model's fit groups.
EvalReport evaluate(const TrainedModel& model, const FeatureMatrix& test);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

/// Row caption used in the summary table, e.g. "Laryngeal imagery (CSP)".
std::string table_row_name(Task task, FeatureMode mode);

/// Plain-text summary: Task | Model | Train set accuracy (%) | Test set
/// accuracy (%) | NIR (%), in the canonical task order. The train column
/// shows the 3-fold CV accuracy on the train groups.
std::string render_table(std::vector<EvalReport> reports);

/// Shuffles labels across epochs (all windows of a group move together).
/// Used to calibrate the harness against chance.
EpochSet permute_labels(const EpochSet& set, std::uint64_t seed);

}  // namespace eegbci
