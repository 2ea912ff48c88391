#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "eegbci/classifiers.hpp"
#include "eegbci/corpus.hpp"
#include "eegbci/csp.hpp"
#include "eegbci/eval.hpp"
#include "eegbci/groups.hpp"
#include "eegbci/preprocess.hpp"
#include "eegbci/spectral.hpp"

namespace eegbci {

struct PipelineConfig {
  PreprocessConfig preprocess;
  SpectrogramParams spectrogram;
  CspParams csp;
  Hyperparams hyper;
  double train_ratio = 0.8;
  int cv_folds = 3;
  double epoch_seconds = 5.0;
  kernels::Exec exec = kernels::Exec::Parallel;
};

/// Channels fed to the spectrogram: occipital for SSVEP and eyes, all
/// channels otherwise.
std::vector<std::string> spectrogram_channels(Task task, const ChannelLayout& layout);

/// Cleans every recording of `task` (unless the corpus is already
/// preprocessed), shifts its markers, and cuts epochs. Group ids run
/// sequentially across sessions.
EpochSet prepare_task_epochs(const Corpus& corpus, Task task, const PipelineConfig& config);

/// Window-level spectrogram features of every epoch. Nothing is learned, so
/// these can be computed once for all groups.
FeatureMatrix spectrogram_features(const EpochSet& epochs, const PipelineConfig& config);

/// Fits CSP on the epochs of `fit_groups` only and featurizes both sides.
/// Per-epoch covariances can be supplied to avoid recomputation.
struct CspFeaturizer {
  CspFeaturizer(const EpochSet& epochs, const PipelineConfig& config);

  struct Result {
    CspModel model;
    FeatureMatrix fit;
    FeatureMatrix score;
  };
  Result operator()(const std::vector<int>& fit_groups, const std::vector<int>& score_groups) const;

 private:
  const EpochSet& epochs_;
  const PipelineConfig& config_;
  std::vector<Eigen::MatrixXd> covariances_;
  FeatureMatrix select(const CspModel& model, const std::vector<int>& groups) const;
};

struct PipelineResult {
  EvalReport report;
  Selection selection;
  GroupSplit split;
  std::optional<CspModel> csp;
};

/// split -> per-fold featurize and select_best -> refit on train -> evaluate.
PipelineResult run_epoch_pipeline(const EpochSet& epochs, FeatureMode mode, std::uint64_t seed,
                                  const PipelineConfig& config = {});

EvalReport run_task_pipeline(const Corpus& corpus, Task task, FeatureMode mode, std::uint64_t seed,
                             const PipelineConfig& config = {});

/// Feature modes evaluated for a task in a full report.
std::vector<FeatureMode> default_modes(Task task);

}  // namespace eegbci
