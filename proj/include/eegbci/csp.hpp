#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eegbci/kernels.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

struct CspParams {
  int n_components = 4;
  /// Blend toward tr(C)/n * I applied to each class covariance.
  double shrinkage = 0.05;
  /// Class whose variance the leading components maximize.
  Label first_class = Label::Yes;
};

/// Two-class common spatial patterns.
///
/// filters rows are ordered by descending generalized eigenvalue: the first
/// n/2 rows maximize variance of `class_labels[0]`, the last n/2 of
/// `class_labels[1]`. Every fit satisfies W (C0 + C1) W^T == I.
struct CspModel {
  Eigen::MatrixXd filters;   // n_components x channels
  Eigen::MatrixXd patterns;  // channels x n_components
  std::vector<double> eigenvalues;
  std::array<Label, 2> class_labels{Label::Yes, Label::No};
  double shrinkage = 0.0;
  Eigen::MatrixXd class_covariances[2];
  ChannelLayout layout;
  /// Groups whose epochs were used for fitting.
  std::set<int> fit_groups;
};

/// Trace-normalized covariance of one epoch.
Eigen::MatrixXd epoch_covariance(const Epoch& epoch);

CspModel fit_csp(const EpochSet& train, const CspParams& params = {});
CspModel fit_csp(std::span<const Epoch* const> train, const ChannelLayout& layout,
                 const CspParams& params = {});
/// Fit from precomputed epoch_covariance() values (one per epoch).
CspModel fit_csp_from_covariances(std::span<const Eigen::MatrixXd> covariances,
                                  std::span<const Label> labels, std::span<const int> group_ids,
                                  const ChannelLayout& layout, const CspParams& params = {});

/// Log of normalized variance of each filtered signal.
std::vector<double> apply_csp(const CspModel& model, const Epoch& epoch, const ChannelLayout& layout);
Eigen::MatrixXd apply_csp(const CspModel& model, std::span<const Epoch* const> epochs,
                          const ChannelLayout& layout, kernels::Exec exec = kernels::Exec::Parallel);

/// Spatial patterns (channels x n_components) for topographic display.
const Eigen::MatrixXd& csp_patterns(const CspModel& model);

/// Versioned JSON document with filters, patterns, eigenvalues, layout and
/// fit groups. Class covariances are not stored.
std::string csp_model_to_json(const CspModel& model);
CspModel csp_model_from_json(const std::string& text);

/// Rows are channels, columns components: channel,c0,c1,...
void write_csp_matrix_csv(const CspModel& model, bool patterns, std::ostream& out);

}  // namespace eegbci
