#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "eegbci/groups.hpp"
#include "eegbci/types.hpp"

namespace eegbci {

enum class Family : std::uint8_t { LogRegL2, LinearSvm, Knn, Qda, DecisionTree };

/// Also the tie-break order of select_best.
inline constexpr std::array<Family, 5> kAllFamilies{Family::LogRegL2, Family::LinearSvm, Family::Knn,
                                                    Family::Qda, Family::DecisionTree};

std::string_view to_string(Family family);
/// Human-readable model name as printed in evaluation tables.
std::string_view display_name(Family family);
Family parse_family(std::string_view text);

/// samples x features with a label and group id per row.
struct FeatureMatrix {
  Eigen::MatrixXd rows;
  std::vector<Label> labels;
  std::vector<int> group_ids;

  std::size_t n_rows() const noexcept { return static_cast<std::size_t>(rows.rows()); }
  std::size_t n_features() const noexcept { return static_cast<std::size_t>(rows.cols()); }
  std::set<int> groups() const { return {group_ids.begin(), group_ids.end()}; }

  void validate() const;
  FeatureMatrix select_rows(std::span<const std::size_t> idx) const;
  FeatureMatrix select_groups(std::span<const int> groups) const;
  void append(const FeatureMatrix& other);
};

struct Hyperparams {
  double logreg_lambda = 1.0;
  int logreg_max_iter = 10000;
  double logreg_tol = 1e-6;
  double svm_c = 1.0;
  int svm_epochs = 100;
  int knn_k = 5;
  double qda_shrinkage = 0.1;
  int tree_max_depth = 5;
  int tree_min_samples_split = 2;
};

/// Per-feature z-score learned on training rows. Zero-variance features keep
/// unit scale.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& rows);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
};

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

struct KnnModel {
  Eigen::MatrixXd points;
  std::vector<Label> labels;
  int k = 5;
};

/// Class-conditional Gaussian with covariance ridge * I + factor^T factor.
struct QdaClass {
  Label label = Label::Yes;
  Eigen::VectorXd mean;
  Eigen::MatrixXd factor;  // m x d
  double ridge = 0.0;
  double log_prior = 0.0;

  // Derived by prepare(); not serialized.
  bool dual = false;
  double log_det = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol;

  void prepare();
  double log_density(const Eigen::VectorXd& x) const;
};

struct QdaModel {
  std::array<QdaClass, 2> classes;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// (n_yes - n_no) / n of the training rows reaching this node.
  double score = 0.0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;
};

struct TrainedModel {
  Family family = Family::LogRegL2;
  std::size_t width = 0;
  Standardizer standardizer;
  std::variant<LinearModel, KnnModel, QdaModel, TreeModel> params;
  std::set<int> fit_groups;
};

/// Deterministic given (data, family, hyperparams, seed). Only LinearSvm
/// consumes the seed (sample order of the stochastic subgradient passes).
TrainedModel train(const FeatureMatrix& data, Family family, const Hyperparams& hyper = {},
                   std::uint64_t seed = 0);

/// Real-valued score per row; >= 0 means Yes.
Eigen::VectorXd decision_function(const TrainedModel& model, const Eigen::MatrixXd& rows);
std::vector<Label> predict(const TrainedModel& model, const Eigen::MatrixXd& rows);

/// Fraction of rows predicted correctly.
double window_accuracy(const TrainedModel& model, const FeatureMatrix& data);
/// Accuracy of per-group majority votes.
double group_accuracy(const TrainedModel& model, const FeatureMatrix& data);

/// Versioned JSON document ({"format":"eegbci-model","version":1,...}).
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

struct Selection {
  Family family = Family::LogRegL2;
  TrainedModel model;
  double cv_accuracy = 0.0;
  std::array<double, kAllFamilies.size()> family_cv{};
};

/// Produces (fit, score) matrices for a fold from the group ids on each side.
/// Lets feature extractors that learn from data (CSP) refit per fold.
using FoldFeaturizer = std::function<std::pair<FeatureMatrix, FeatureMatrix>(
    const std::vector<int>& fit_groups, const std::vector<int>& score_groups)>;

/// Trains every family on each fold's complement, scores the held-out fold by
/// group-level accuracy, picks the best mean (ties by kAllFamilies order) and
/// refits it on all folds.
Selection select_best(const FeatureMatrix& data, const GroupFolds& folds, const Hyperparams& hyper = {},
                      std::uint64_t seed = 0);
Selection select_best(const FoldFeaturizer& featurize, const GroupFolds& folds,
                      const Hyperparams& hyper = {}, std::uint64_t seed = 0);

namespace detail {

/// Mean log-loss + lambda * |w|^2 with labels y in {0, 1} (1 == Yes).
double logreg_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                        double b, double lambda, Eigen::VectorXd* grad_w = nullptr,
                        double* grad_b = nullptr);

struct LogRegFit {
  LinearModel model;
  std::vector<double> loss_history;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// Gradient descent with Armijo backtracking on standardized rows.
LogRegFit fit_logreg(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Hyperparams& hyper);

}  // namespace detail

}  // namespace eegbci
