#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace clams {

// Dense row-major design matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const noexcept {
    return {values.data() + i * cols, cols};
  }
};

// A split node sends x[feature_index] <= threshold left. Leaves carry
// feature_index == -1.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double weight = 1.0;

  double evaluate(std::span<const double> x) const noexcept;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct TreeEnsemble {
  double base_score = 0.0;
  std::vector<RegressionTree> trees;

  // base_score + sum of weight * tree output; not clamped.
  double predict_raw(std::span<const double> x) const noexcept;

  friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;
};

struct BoostingParams {
  int n_trees = 300;
  int max_depth = 3;
  double learning_rate = 0.05;
  double subsample = 0.8;
  int min_leaf = 5;
  std::uint64_t seed = 0;
};

// Gradient boosting on squared loss: every tree is a greedy exact-split
// regression tree fitted to the current residuals of a row subsample
// (drawn without replacement), added with weight learning_rate.
TreeEnsemble fit_boosted_trees(const FeatureMatrix& x, std::span<const double> y,
                               const BoostingParams& params);

}  // namespace clams
