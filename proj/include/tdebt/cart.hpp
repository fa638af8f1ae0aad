#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tdebt/matrix.hpp"

namespace tdebt {

enum class ThresholdMode {
  BestSplit,  // scan all midpoints of sorted unique values
  Random,     // one uniform threshold per candidate feature
};

struct CartParams {
  std::size_t max_depth = 0;          // 0 = unbounded
  std::size_t min_samples_leaf = 1;
  std::size_t feature_subsample = 0;  // candidate features per node; 0 = all
  ThresholdMode threshold_mode = ThresholdMode::BestSplit;
  std::uint64_t seed = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // rows with x[feature] <= threshold go left
  double value = 0.0;         // leaf prediction (mean of its samples)
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Regression tree stored as a flat node array; node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  double predict_row(std::span<const double> row) const {
    std::size_t idx = 0;
    while (!nodes[idx].is_leaf()) {
      const TreeNode& n = nodes[idx];
      idx = row[static_cast<std::size_t>(n.feature)] <= n.threshold
                ? static_cast<std::size_t>(n.left)
                : static_cast<std::size_t>(n.right);
    }
    return nodes[idx].value;
  }

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Grows a binary variance-reduction tree. Splits minimize the summed child
/// squared error; ties break on lowest feature index, then smallest
/// threshold. Recursion stops at max_depth, min_samples_leaf, or zero
/// variance.
Tree fit_cart(const Matrix& x, std::span<const double> y, const CartParams& params);

/// Same, restricted to `rows` (indices may repeat, e.g. bootstrap samples).
Tree fit_cart_rows(const Matrix& x, std::span<const double> y,
                   std::vector<std::size_t> rows, const CartParams& params);

std::vector<double> predict_tree(const Tree& tree, const Matrix& x);

}  // namespace tdebt
