#include "eegbci/groups.hpp"

#include <algorithm>
#include <cmath>

#include "eegbci/random.hpp"

namespace eegbci {

std::vector<int> GroupFolds::complement(std::size_t k) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < folds.size(); ++j)
    if (j != k) out.insert(out.end(), folds[j].begin(), folds[j].end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::array<std::vector<int>, 2> by_class(std::span<const GroupInfo> groups) {
  std::array<std::vector<int>, 2> out;
  std::set<int> seen;
  for (const auto& g : groups) {
    if (!seen.insert(g.group_id).second)
      throw Error(ErrorCode::InvalidArgument, "group " + std::to_string(g.group_id) + " listed twice");
    out[g.label == Label::Yes ? 0 : 1].push_back(g.group_id);
  }
  // Shuffle from a canonical order so callers' listing order is irrelevant.
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

}  // namespace

GroupSplit group_split(std::span<const GroupInfo> groups, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw Error(ErrorCode::InvalidArgument, "train ratio must lie in (0, 1)");
  auto cls = by_class(groups);
  if (cls[0].size() < 2 || cls[1].size() < 2)
    throw Error(ErrorCode::TooFewGroups, "group split needs at least two groups of each class");

  const std::size_t total = cls[0].size() + cls[1].size();
  const auto n_train = static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(total) + 1e-9));

  // Largest-remainder apportionment of n_train across the two classes.
  std::array<std::size_t, 2> quota{};
  std::array<double, 2> remainder{};
  for (int k = 0; k < 2; ++k) {
    const double exact = static_cast<double>(n_train) * static_cast<double>(cls[k].size()) /
                         static_cast<double>(total);
    quota[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[k] = exact - static_cast<double>(quota[k]);
  }
  while (quota[0] + quota[1] < n_train) {
    const int k = remainder[0] >= remainder[1] ? 0 : 1;
    ++quota[k];
    remainder[k] = -1.0;
  }
  for (int k = 0; k < 2; ++k) quota[k] = std::clamp<std::size_t>(quota[k], 1, cls[k].size() - 1);

  Rng rng(seed);
  GroupSplit split;
  split.seed = seed;
  for (int k = 0; k < 2; ++k) {
    rng.shuffle(cls[k]);
    split.train_groups.insert(split.train_groups.end(), cls[k].begin(),
                              cls[k].begin() + static_cast<std::ptrdiff_t>(quota[k]));
    split.test_groups.insert(split.test_groups.end(),
                             cls[k].begin() + static_cast<std::ptrdiff_t>(quota[k]), cls[k].end());
  }
  std::sort(split.train_groups.begin(), split.train_groups.end());
  std::sort(split.test_groups.begin(), split.test_groups.end());
  return split;
}

GroupFolds group_cv_folds(std::span<const GroupInfo> groups, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "cross-validation needs k >= 2");
  auto cls = by_class(groups);
  if (cls[0].size() + cls[1].size() < static_cast<std::size_t>(k))
    throw Error(ErrorCode::TooFewGroups, "fewer groups than folds");

  Rng rng(seed);
  GroupFolds f;
  f.seed = seed;
  f.folds.resize(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& v : cls) {
    rng.shuffle(v);
    for (int g : v) {
      f.folds[next].push_back(g);
      next = (next + 1) % f.folds.size();
    }
  }
  for (auto& fold : f.folds) std::sort(fold.begin(), fold.end());
  return f;
}

std::map<int, Label> majority_vote(std::span<const Label> predictions, std::span<const int> group_ids) {
  if (predictions.size() != group_ids.size())
    throw Error(ErrorCode::InvalidArgument, "one group id per prediction required");
  std::map<int, int> margin;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    margin[group_ids[i]] += predictions[i] == Label::Yes ? 1 : -1;
  std::map<int, Label> out;
  for (const auto& [g, m] : margin) out[g] = m >= 0 ? Label::Yes : Label::No;
  return out;
}

void require_disjoint(const std::set<int>& fit_groups, std::span<const int> score_groups,
                      const char* context) {
  for (int g : score_groups)
    if (fit_groups.count(g))
      throw Error(ErrorCode::Leakage, std::string(context) + ": group " + std::to_string(g) +
                                          " was used for fitting and scoring");
}

}  // namespace eegbci
