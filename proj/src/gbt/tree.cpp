#include "imbboost/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbboost/error.hpp"

namespace imbboost::gbt {

Tree Tree::leaf(double weight) {
  Tree t;
  t.nodes_.front().weight = weight;
  return t;
}

std::size_t Tree::leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int Tree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) continue;
    d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
    deepest = std::max(deepest, d[i] + 1);
  }
  return deepest;
}

std::int32_t Tree::split(std::int32_t node, std::int32_t feature, double threshold, Direction default_direction) {
  if (!nodes_.at(node).is_leaf()) throw Error("tree: node already split");
  const auto left = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(TreeNode{});
  nodes_.push_back(TreeNode{});
  TreeNode& n = nodes_[node];
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = left + 1;
  n.default_direction = default_direction;
  n.weight = 0.0;
  return left;
}

void Tree::set_leaf_weight(std::int32_t node, double weight) { nodes_.at(node).weight = weight; }

Tree tree_from_nodes(std::vector<TreeNode> nodes) {
  if (nodes.empty()) throw Error("tree: no nodes");
  std::vector<int> parents(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) {
      if (n.right >= 0) throw Error("tree: leaf with one child");
      if (!std::isfinite(n.weight)) throw Error("tree: non-finite leaf weight");
      continue;
    }
    const auto size = static_cast<std::int32_t>(nodes.size());
    if (n.right < 0 || n.left >= size || n.right >= size || n.left <= static_cast<std::int32_t>(i) ||
        n.right <= static_cast<std::int32_t>(i) || n.feature < 0) {
      throw Error("tree: malformed decision node " + std::to_string(i));
    }
    ++parents[n.left];
    ++parents[n.right];
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (parents[i] != 1) throw Error("tree: node " + std::to_string(i) + " is not reachable exactly once");
  }
  Tree t;
  t.nodes_ = std::move(nodes);
  return t;
}

double split_gain(const GradSum& left, const GradSum& right, const SplitParams& params) {
  const double l = params.l2_lambda;
  const double g = left.grad + right.grad;
  const double h = left.hess + right.hess;
  return 0.5 * (left.grad * left.grad / (left.hess + l) + right.grad * right.grad / (right.hess + l) -
                g * g / (h + l)) -
         params.min_split_loss;
}

double leaf_weight(const GradSum& sum, double l2_lambda) { return -sum.grad / (sum.hess + l2_lambda); }

double split_threshold(double lower, double upper) {
  const double mid = lower + (upper - lower) * 0.5;
  return mid > lower ? mid : upper;
}

std::optional<SplitCandidate> best_split(std::span<const double> values, std::span<const GradPair> gpairs,
                                         const SplitParams& params, std::int32_t feature) {
  if (values.size() != gpairs.size()) throw Error("length mismatch: values vs gradients");
  GradSum total;
  GradSum missing;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += gpairs[i];
    if (std::isnan(values[i])) {
      missing += gpairs[i];
    } else {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SplitScanner scanner(total, missing, feature, &params);
  for (auto i : order) scanner.push(values[i], gpairs[i]);
  if (!(scanner.best().gain > 0.0)) return std::nullopt;
  return scanner.best();
}

}  // namespace imbboost::gbt
