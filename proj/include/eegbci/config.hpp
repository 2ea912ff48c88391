#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "eegbci/pipeline.hpp"
#include "eegbci/synth.hpp"

namespace eegbci {

/// Everything a CLI run depends on besides its inputs and seed.
///
/// File form is INI:
///
///   [preprocess]  trim_s lo_hz hi_hz order notch_hz notch_q
///                 enable_bandpass enable_notch enable_standardize
///   [spectrogram] window_samples hop_samples band_lo_hz band_hi_hz
///   [csp]         n_components shrinkage
///   [classifiers] logreg_lambda logreg_max_iter logreg_tol svm_c svm_epochs
///                 knn_k qda_shrinkage tree_max_depth tree_min_samples_split
///   [split]       train_ratio cv_folds epoch_seconds
///   [synth]       rate_hz snr ... (see SynthConfig)
///
/// Missing keys keep their defaults; unknown keys are an error.
struct ToolConfig {
  PipelineConfig pipeline;
  SynthConfig synth;
};

ToolConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
ToolConfig load_config(const std::filesystem::path& path);

/// One "section.key=value" line per field in a fixed order, doubles at
/// round-trip precision. Equal configs give equal text.
std::string canonical_config(const ToolConfig& config);
/// Hex SHA-256 of canonical_config.
std::string config_hash(const ToolConfig& config);

}  // namespace eegbci
