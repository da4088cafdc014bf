#include "clams/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clams/errors.hpp"
#include "clams/random.hpp"

namespace clams {

double RegressionTree::evaluate(std::span<const double> x) const noexcept {
  if (nodes.empty()) return 0.0;
  int at = 0;
  while (nodes[at].feature_index >= 0) {
    const TreeNode& n = nodes[at];
    at = x[n.feature_index] <= n.threshold ? n.left : n.right;
  }
  return nodes[at].leaf_value;
}

double TreeEnsemble::predict_raw(std::span<const double> x) const noexcept {
  double out = base_score;
  for (const RegressionTree& t : trees) out += t.weight * t.evaluate(x);
  return out;
}

namespace {

constexpr double kMinGain = 1e-12;

struct Candidate {
  double gain = kMinGain;
  int feature = -1;
  double threshold = 0.0;
};

// Grows one tree level by level. node_of[i] holds the node currently
// containing row i, or -1 for rows outside the subsample.
RegressionTree grow_tree(const FeatureMatrix& x, std::span<const double> residual,
                         const std::vector<std::vector<std::size_t>>& sorted,
                         std::vector<int>& node_of, const BoostingParams& params) {
  RegressionTree tree;
  tree.nodes.emplace_back();
  std::vector<double> sum{0.0};
  std::vector<int> count{0};
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (node_of[i] == 0) {
      sum[0] += residual[i];
      ++count[0];
    }
  }

  std::vector<int> frontier{0};
  for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
    const std::size_t n_nodes = tree.nodes.size();
    std::vector<char> active(n_nodes, 0);
    for (int id : frontier) {
      if (count[id] >= 2 * params.min_leaf) active[id] = 1;
    }
    std::vector<Candidate> best(n_nodes);
    std::vector<double> left_sum(n_nodes);
    std::vector<int> left_count(n_nodes);
    std::vector<double> last(n_nodes);

    for (std::size_t f = 0; f < x.cols; ++f) {
      std::fill(left_sum.begin(), left_sum.end(), 0.0);
      std::fill(left_count.begin(), left_count.end(), 0);
      for (std::size_t i : sorted[f]) {
        const int id = node_of[i];
        if (id < 0 || !active[id]) continue;
        const double v = x.values[i * x.cols + f];
        const int n_left = left_count[id];
        if (n_left > 0 && v > last[id]) {
          const int n_right = count[id] - n_left;
          if (n_left >= params.min_leaf && n_right >= params.min_leaf) {
            const double s_left = left_sum[id];
            const double s_right = sum[id] - s_left;
            const double gain = s_left * s_left / n_left + s_right * s_right / n_right -
                                sum[id] * sum[id] / count[id];
            if (gain > best[id].gain) {
              double threshold = 0.5 * (last[id] + v);
              if (!(threshold < v)) threshold = last[id];
              best[id] = {gain, static_cast<int>(f), threshold};
            }
          }
        }
        left_sum[id] += residual[i];
        ++left_count[id];
        last[id] = v;
      }
    }

    std::vector<int> next;
    for (int id : frontier) {
      if (best[id].feature < 0) continue;
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      tree.nodes[id].feature_index = best[id].feature;
      tree.nodes[id].threshold = best[id].threshold;
      tree.nodes[id].left = left;
      tree.nodes[id].right = left + 1;
      sum.push_back(0.0);
      sum.push_back(0.0);
      count.push_back(0);
      count.push_back(0);
      next.push_back(left);
      next.push_back(left + 1);
    }
    if (next.empty()) break;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const int id = node_of[i];
      if (id < 0) continue;
      const TreeNode& node = tree.nodes[id];
      if (node.feature_index < 0 || node.left < 0) continue;
      const int child = x.values[i * x.cols + node.feature_index] <= node.threshold ? node.left
                                                                                   : node.right;
      node_of[i] = child;
      sum[child] += residual[i];
      ++count[child];
    }
    frontier = std::move(next);
  }

  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    TreeNode& node = tree.nodes[id];
    if (node.feature_index < 0) node.leaf_value = count[id] > 0 ? sum[id] / count[id] : 0.0;
  }
  return tree;
}

}  // namespace

TreeEnsemble fit_boosted_trees(const FeatureMatrix& x, std::span<const double> y,
                               const BoostingParams& params) {
  if (x.rows == 0 || x.cols == 0 || y.size() != x.rows || x.values.size() != x.rows * x.cols) {
    throw Error(ErrorCode::InvalidArgument, "boosting: malformed design matrix");
  }
  if (params.n_trees < 1 || params.max_depth < 1 || params.min_leaf < 1 ||
      !(params.learning_rate > 0.0) || !(params.subsample > 0.0) || params.subsample > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "boosting: invalid parameters");
  }

  const std::size_t n = x.rows;
  TreeEnsemble ensemble;
  ensemble.base_score = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  std::vector<std::vector<std::size_t>> sorted(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), std::size_t{0});
    std::stable_sort(sorted[f].begin(), sorted[f].end(), [&](std::size_t a, std::size_t b) {
      return x.values[a * x.cols + f] < x.values[b * x.cols + f];
    });
  }

  const std::size_t sample_size = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))), 1, n);
  Rng rng(params.seed);
  std::vector<double> prediction(n, ensemble.base_score);
  std::vector<double> residual(n);
  std::vector<std::size_t> order(n);
  std::vector<int> node_of(n);
  ensemble.trees.reserve(params.n_trees);

  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - prediction[i];
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < sample_size; ++i) {
      std::swap(order[i], order[i + rng.below(n - i)]);
    }
    std::fill(node_of.begin(), node_of.end(), -1);
    for (std::size_t i = 0; i < sample_size; ++i) node_of[order[i]] = 0;

    RegressionTree tree = grow_tree(x, residual, sorted, node_of, params);
    tree.weight = params.learning_rate;
    for (std::size_t i = 0; i < n; ++i) prediction[i] += tree.weight * tree.evaluate(x.row(i));
    ensemble.trees.push_back(std::move(tree));
  }
  return ensemble;
}

}  // namespace clams
