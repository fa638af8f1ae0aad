#include "tdebt/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdebt/error.hpp"
#include "tdebt/rng.hpp"

namespace tdebt {

namespace {

struct BestSplit {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;  // summed child squared error; lower is better
};

struct Grower {
  const Matrix& x;
  std::span<const double> y;
  const CartParams& params;
  Rng rng;
  Tree tree;
  std::vector<std::size_t> feature_scratch;
  std::vector<std::pair<double, double>> sorted_scratch;  // (feature value, target)

  Grower(const Matrix& x_, std::span<const double> y_, const CartParams& p)
      : x(x_), y(y_), params(p), rng(p.seed) {
    feature_scratch.resize(x.cols());
    std::iota(feature_scratch.begin(), feature_scratch.end(), std::size_t{0});
  }

  // Candidate features for one node, ascending. Subsampling consumes
  // randomness only when it actually narrows the set.
  std::vector<std::size_t> pick_features() {
    std::size_t p = x.cols();
    std::size_t m = params.feature_subsample == 0 ? p : std::min(params.feature_subsample, p);
    if (m >= p) return feature_scratch;
    std::vector<std::size_t> pool = feature_scratch;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + rng.next_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  void consider(BestSplit& best, std::size_t feature, double threshold, double score) {
    if (!best.found || score < best.score) {
      best = {true, feature, threshold, score};
    }
  }

  void scan_best_thresholds(BestSplit& best, std::size_t feature,
                            std::span<const std::size_t> rows) {
    sorted_scratch.clear();
    double total_sum = 0.0, total_sq = 0.0;
    for (std::size_t r : rows) {
      sorted_scratch.emplace_back(x(r, feature), y[r]);
      total_sum += y[r];
      total_sq += y[r] * y[r];
    }
    std::sort(sorted_scratch.begin(), sorted_scratch.end());

    const std::size_t n = sorted_scratch.size();
    double left_sum = 0.0, left_sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += sorted_scratch[i].second;
      left_sq += sorted_scratch[i].second * sorted_scratch[i].second;
      if (sorted_scratch[i].first == sorted_scratch[i + 1].first) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                         (right_sq - right_sum * right_sum / static_cast<double>(nr));
      const double threshold = (sorted_scratch[i].first + sorted_scratch[i + 1].first) / 2.0;
      consider(best, feature, threshold, sse);
    }
  }

  void scan_random_threshold(BestSplit& best, std::size_t feature,
                             std::span<const std::size_t> rows) {
    double lo = x(rows[0], feature), hi = lo;
    for (std::size_t r : rows) {
      lo = std::min(lo, x(r, feature));
      hi = std::max(hi, x(r, feature));
    }
    if (lo == hi) return;  // constant feature, no draw consumed
    double threshold = lo + rng.next_real() * (hi - lo);
    if (threshold >= hi) threshold = std::nextafter(hi, lo);

    std::size_t nl = 0;
    double left_sum = 0.0, left_sq = 0.0, total_sum = 0.0, total_sq = 0.0;
    for (std::size_t r : rows) {
      total_sum += y[r];
      total_sq += y[r] * y[r];
      if (x(r, feature) <= threshold) {
        ++nl;
        left_sum += y[r];
        left_sq += y[r] * y[r];
      }
    }
    const std::size_t nr = rows.size() - nl;
    if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) return;
    const double right_sum = total_sum - left_sum;
    const double right_sq = total_sq - left_sq;
    const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                       (right_sq - right_sum * right_sum / static_cast<double>(nr));
    consider(best, feature, threshold, sse);
  }

  std::int32_t make_leaf(std::span<const std::size_t> rows) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += y[r];
    TreeNode leaf;
    leaf.value = sum / static_cast<double>(rows.size());
    tree.nodes.push_back(leaf);
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }

  std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
    bool depth_ok = params.max_depth == 0 || depth < params.max_depth;
    bool splittable = depth_ok && rows.size() >= 2 * params.min_samples_leaf && rows.size() >= 2;
    if (splittable) {
      auto [min_it, max_it] =
          std::minmax_element(rows.begin(), rows.end(),
                              [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
      if (y[*min_it] == y[*max_it]) splittable = false;  // zero variance
    }
    if (!splittable) return make_leaf(rows);

    BestSplit best;
    for (std::size_t f : pick_features()) {
      if (params.threshold_mode == ThresholdMode::BestSplit)
        scan_best_thresholds(best, f, rows);
      else
        scan_random_threshold(best, f, rows);
    }
    if (!best.found) return make_leaf(rows);

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
    }

    std::int32_t self = static_cast<std::int32_t>(tree.nodes.size());
    TreeNode node;
    node.feature = static_cast<std::int32_t>(best.feature);
    node.threshold = best.threshold;
    tree.nodes.push_back(node);
    rows.clear();
    rows.shrink_to_fit();
    std::int32_t left = grow(left_rows, depth + 1);
    std::int32_t right = grow(right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
  }
};

}  // namespace

Tree fit_cart_rows(const Matrix& x, std::span<const double> y, std::vector<std::size_t> rows,
                   const CartParams& params) {
  if (rows.empty()) throw Error(ErrorKind::Precondition, "fit_cart: no training rows");
  if (params.min_samples_leaf < 1)
    throw Error(ErrorKind::Config, "fit_cart: min_samples_leaf must be >= 1");
  Grower grower(x, y, params);
  grower.grow(rows, 0);
  return std::move(grower.tree);
}

Tree fit_cart(const Matrix& x, std::span<const double> y, const CartParams& params) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_cart_rows(x, y, std::move(rows), params);
}

std::vector<double> predict_tree(const Tree& tree, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = tree.predict_row(x.row(i));
  return out;
}

}  // namespace tdebt
