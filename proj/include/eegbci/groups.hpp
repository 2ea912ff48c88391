#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "eegbci/types.hpp"

namespace eegbci {

struct GroupInfo {
  int group_id = 0;
  Label label = Label::Yes;
};

struct GroupSplit {
  std::vector<int> train_groups;
  std::vector<int> test_groups;
  std::uint64_t seed = 0;
};

struct GroupFolds {
  std::vector<std::vector<int>> folds;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return folds.size(); }
  /// Every group outside fold `k`.
  std::vector<int> complement(std::size_t k) const;
};

/// Label-stratified random split at group granularity. The train side gets
/// floor(ratio * n_groups) groups, apportioned across classes by largest
/// remainder, with at least one group of each class left for testing.
GroupSplit group_split(std::span<const GroupInfo> groups, double train_ratio = 0.8,
                       std::uint64_t seed = 0);

/// Label-stratified partition of `groups` into k folds: each class is
/// shuffled and dealt round-robin, continuing across classes, so fold sizes
/// differ by at most one.
GroupFolds group_cv_folds(std::span<const GroupInfo> groups, int k = 3, std::uint64_t seed = 0);

/// Majority label per group; ties resolve to Yes.
std::map<int, Label> majority_vote(std::span<const Label> predictions, std::span<const int> group_ids);

/// Throws ErrorCode::Leakage if any group is on both sides.
void require_disjoint(const std::set<int>& fit_groups, std::span<const int> score_groups,
                      const char* context);

}  // namespace eegbci
