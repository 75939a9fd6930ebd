#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "imbboost/objective.hpp"

namespace imbboost::gbt {

enum class Direction : std::uint8_t { left, right };

// Flat node storage: a node is a decision when it has children, a leaf
// otherwise. Rows with value < threshold go left; missing values follow
// default_direction.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Direction default_direction = Direction::left;
  double weight = 0.0;

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

class Tree {
 public:
  Tree() : nodes_{TreeNode{}} {}
  static Tree leaf(double weight);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }
  std::size_t leaves() const;
  int depth() const;

  // Turns leaf `node` into a decision with two fresh leaves; returns the
  // index of the left child (right is left + 1).
  std::int32_t split(std::int32_t node, std::int32_t feature, double threshold, Direction default_direction);
  void set_leaf_weight(std::int32_t node, double weight);

  // Node index reached by a row. `value(f)` returns feature f of the row.
  template <typename ValueOf>
  std::int32_t route(ValueOf&& value) const {
    std::int32_t n = 0;
    while (!nodes_[n].is_leaf()) {
      const TreeNode& node = nodes_[n];
      const double v = value(node.feature);
      const bool go_left = v != v ? node.default_direction == Direction::left : v < node.threshold;
      n = go_left ? node.left : node.right;
    }
    return n;
  }

  template <typename ValueOf>
  double predict(ValueOf&& value) const {
    return nodes_[route(value)].weight;
  }

  bool operator==(const Tree&) const = default;

 private:
  friend Tree tree_from_nodes(std::vector<TreeNode> nodes);
  std::vector<TreeNode> nodes_;
};

// Validates structure (children in range, acyclic, finite leaf weights).
Tree tree_from_nodes(std::vector<TreeNode> nodes);

struct GradSum {
  double grad = 0.0;
  double hess = 0.0;

  GradSum& operator+=(const GradPair& g) {
    grad += g.grad;
    hess += g.hess;
    return *this;
  }
};

struct SplitParams {
  double l2_lambda = 1.0;
  double min_split_loss = 0.0;
  double min_child_hessian = 1.0;
};

// 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)] - min_split_loss
double split_gain(const GradSum& left, const GradSum& right, const SplitParams& params);

// -G / (H + l), before learning-rate shrinkage.
double leaf_weight(const GradSum& sum, double l2_lambda);

// Midpoint of two consecutive distinct values that still separates them.
double split_threshold(double lower, double upper);

struct SplitCandidate {
  double gain = -std::numeric_limits<double>::infinity();
  std::int32_t feature = -1;
  double threshold = 0.0;
  Direction default_direction = Direction::left;
  GradSum left;
  GradSum right;

  // Strictly better gain wins; equal gains keep the earlier candidate, so
  // scanning features and thresholds in ascending order yields the
  // lowest-feature, lowest-threshold tie-break.
  bool better_than(const SplitCandidate& other) const { return gain > other.gain; }
};

// Exact greedy scan of one feature inside one node. Feed non-missing values
// in ascending order; candidates sit at midpoints between consecutive
// distinct values, and for each the missing rows are tried on both sides.
class SplitScanner {
 public:
  SplitScanner() = default;
  SplitScanner(GradSum node_total, GradSum missing, std::int32_t feature, const SplitParams* params)
      : total_(node_total),
        missing_(missing),
        feature_(feature),
        lambda_(params->l2_lambda),
        min_loss_(params->min_split_loss),
        min_hess_(params->min_child_hessian),
        has_missing_(missing.hess != 0.0),
        parent_(node_total.grad * node_total.grad / (node_total.hess + params->l2_lambda)) {}

  void push(double value, const GradPair& g) {
    if (value != last_ && has_last_) evaluate(value);
    left_.grad += g.grad;
    left_.hess += g.hess;
    last_ = value;
    has_last_ = true;
  }

  const SplitCandidate& best() const { return best_; }

 private:
  // Missing rows on the left first, then on the right. Without missing rows
  // both placements coincide and the left default is kept.
  void evaluate(double next_value) {
    consider({left_.grad + missing_.grad, left_.hess + missing_.hess}, Direction::left, next_value);
    if (has_missing_) consider(left_, Direction::right, next_value);
  }

  void consider(const GradSum& left, Direction dir, double next_value) {
    const GradSum right{total_.grad - left.grad, total_.hess - left.hess};
    if (left.hess < min_hess_ || right.hess < min_hess_) return;
    const double gain = 0.5 * (left.grad * left.grad / (left.hess + lambda_) +
                               right.grad * right.grad / (right.hess + lambda_) - parent_) -
                        min_loss_;
    if (gain > best_.gain) best_ = {gain, feature_, split_threshold(last_, next_value), dir, left, right};
  }

  GradSum total_;
  GradSum missing_;
  GradSum left_;
  double last_ = 0.0;
  std::int32_t feature_ = -1;
  double lambda_ = 1.0;
  double min_loss_ = 0.0;
  double min_hess_ = 1.0;
  bool has_last_ = false;
  bool has_missing_ = false;
  double parent_ = 0.0;
  SplitCandidate best_;
};


// Best split of one node on a single feature. `values` holds the feature
// (NaN for missing), `gpairs` the per-row derivatives. Returns nullopt when
// no candidate has positive gain.
std::optional<SplitCandidate> best_split(std::span<const double> values, std::span<const GradPair> gpairs,
                                         const SplitParams& params, std::int32_t feature = 0);

}  // namespace imbboost::gbt
