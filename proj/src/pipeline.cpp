#include "eegbci/pipeline.hpp"

#include <map>

#include "eegbci/markers.hpp"
#include "eegbci/random.hpp"

namespace eegbci {

std::vector<std::string> spectrogram_channels(Task task, const ChannelLayout& layout) {
  if (task == Task::Ssvep || task == Task::EyesOpenClosed) return occipital_channels();
  return layout.names();
}

std::vector<FeatureMode> default_modes(Task task) {
  switch (task) {
    case Task::EyesOpenClosed:
    case Task::Ssvep: return {FeatureMode::Spectrogram};
    case Task::MotorActivity:
    case Task::MotorImagery: return {FeatureMode::Csp};
    case Task::LaryngealActivity:
    case Task::LaryngealImagery: return {FeatureMode::Csp, FeatureMode::Spectrogram};
  }
  return {};
}

EpochSet prepare_task_epochs(const Corpus& corpus, Task task, const PipelineConfig& config) {
  const auto items = corpus.for_task(task);
  if (items.empty()) throw Error(ErrorCode::TaskAbsent, "corpus has no recordings of " + std::string(to_string(task)));

  EpochSet all;
  all.task = task;
  int next_group = 0;
  for (const SessionData* item : items) {
    EpochSet part;
    if (corpus.preprocessed) {
      part = slice_epochs(item->recording, item->markers, task, config.epoch_seconds, next_group);
    } else {
      const auto offset = trim_offset(item->recording, config.preprocess.trim_s);
      const Recording clean = clean_pipeline(item->recording, config.preprocess, config.exec);
      part = slice_epochs(clean, shift_markers(item->markers, offset), task, config.epoch_seconds, next_group);
    }
    if (all.epochs.empty()) {
      all.rate_hz = part.rate_hz;
      all.layout = part.layout;
    } else if (part.rate_hz != all.rate_hz || !(part.layout == all.layout)) {
      throw Error(ErrorCode::LayoutMismatch, "recordings of one task differ in rate or layout");
    }
    next_group += static_cast<int>(part.size());
    for (auto& e : part.epochs) all.epochs.push_back(std::move(e));
  }
  all.validate();
  return all;
}

FeatureMatrix spectrogram_features(const EpochSet& epochs, const PipelineConfig& config) {
  const auto channels = spectrogram_channels(epochs.task, epochs.layout);
  std::vector<std::vector<double>> rows;
  FeatureMatrix out;
  for (const auto& e : epochs.epochs) {
    const Spectrogram s = spectrogram(e, epochs.rate_hz, epochs.layout, channels, config.spectrogram, config.exec);
    for (auto& w : features_from_spectrogram(s)) {
      rows.push_back(std::move(w.values));
      out.labels.push_back(e.label);
      out.group_ids.push_back(w.group_id);
    }
  }
  const auto width = rows.empty() ? 0 : rows.front().size();
  out.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) out.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

CspFeaturizer::CspFeaturizer(const EpochSet& epochs, const PipelineConfig& config)
    : epochs_(epochs), config_(config) {
  std::vector<const Epoch*> ptrs;
  for (const auto& e : epochs.epochs) ptrs.push_back(&e);
  covariances_ = kernels::normalized_covariances(ptrs, config.exec);
}

FeatureMatrix CspFeaturizer::select(const CspModel& model, const std::vector<int>& groups) const {
  const std::set<int> wanted(groups.begin(), groups.end());
  std::vector<const Epoch*> ptrs;
  FeatureMatrix out;
  for (const auto& e : epochs_.epochs) {
    if (!wanted.count(e.group_id)) continue;
    ptrs.push_back(&e);
    out.labels.push_back(e.label);
    out.group_ids.push_back(e.group_id);
  }
  out.rows = apply_csp(model, ptrs, epochs_.layout, config_.exec);
  return out;
}

CspFeaturizer::Result CspFeaturizer::operator()(const std::vector<int>& fit_groups,
                                                const std::vector<int>& score_groups) const {
  const std::set<int> wanted(fit_groups.begin(), fit_groups.end());
  std::vector<Eigen::MatrixXd> covs;
  std::vector<Label> labels;
  std::vector<int> groups;
  for (std::size_t i = 0; i < epochs_.epochs.size(); ++i) {
    const auto& e = epochs_.epochs[i];
    if (!wanted.count(e.group_id)) continue;
    covs.push_back(covariances_[i]);
    labels.push_back(e.label);
    groups.push_back(e.group_id);
  }
  Result r;
  r.model = fit_csp_from_covariances(covs, labels, groups, epochs_.layout, config_.csp);
  require_disjoint(r.model.fit_groups, score_groups, "CSP fit");
  r.fit = select(r.model, fit_groups);
  r.score = select(r.model, score_groups);
  return r;
}

PipelineResult run_epoch_pipeline(const EpochSet& epochs, FeatureMode mode, std::uint64_t seed,
                                  const PipelineConfig& config) {
  epochs.validate();
  std::vector<GroupInfo> info;
  for (const auto& e : epochs.epochs) info.push_back({e.group_id, e.label});

  PipelineResult out;
  out.split = group_split(info, config.train_ratio, derive_seed(seed, "split"));
  const std::set<int> train_set(out.split.train_groups.begin(), out.split.train_groups.end());
  require_disjoint(train_set, out.split.test_groups, "train/test split");
  std::vector<GroupInfo> train_info;
  for (const auto& g : info)
    if (train_set.count(g.group_id)) train_info.push_back(g);
  const GroupFolds folds = group_cv_folds(train_info, config.cv_folds, derive_seed(seed, "folds"));
  const std::uint64_t model_seed = derive_seed(seed, "model");

  FeatureMatrix train, test;
  if (mode == FeatureMode::Spectrogram) {
    const FeatureMatrix all = spectrogram_features(epochs, config);
    out.selection = select_best(
        [&](const std::vector<int>& fit, const std::vector<int>& score) {
          return std::make_pair(all.select_groups(fit), all.select_groups(score));
        },
        folds, config.hyper, model_seed);
    train = all.select_groups(out.split.train_groups);
    test = all.select_groups(out.split.test_groups);
  } else {
    const CspFeaturizer featurize(epochs, config);
    out.selection = select_best(
        [&](const std::vector<int>& fit, const std::vector<int>& score) {
          auto r = featurize(fit, score);
          return std::make_pair(std::move(r.fit), std::move(r.score));
        },
        folds, config.hyper, model_seed);
    auto r = featurize(out.split.train_groups, out.split.test_groups);
    out.csp = std::move(r.model);
    train = std::move(r.fit);
    test = std::move(r.score);
  }

  require_disjoint(out.selection.model.fit_groups, out.split.test_groups, "final model");
  EvalReport& rep = out.report;
  rep = evaluate(out.selection.model, test);
  rep.task = epochs.task;
  rep.feature_mode = mode;
  rep.train_acc = group_accuracy(out.selection.model, train);
  rep.cv_acc = out.selection.cv_accuracy;
  rep.family_cv = out.selection.family_cv;
  rep.n_train_groups = out.split.train_groups.size();
  rep.seed = seed;
  return out;
}

EvalReport run_task_pipeline(const Corpus& corpus, Task task, FeatureMode mode, std::uint64_t seed,
                             const PipelineConfig& config) {
  const EpochSet epochs = prepare_task_epochs(corpus, task, config);
  return run_epoch_pipeline(epochs, mode, seed, config).report;
}

}  // namespace eegbci
