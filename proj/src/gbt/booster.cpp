#include "imbboost/booster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "imbboost/error.hpp"
#include "imbboost/metrics.hpp"
#include "imbboost/random.hpp"

namespace imbboost::gbt {

namespace {

using Columns = std::vector<std::span<const double>>;

// Non-missing entries of one feature in ascending value order (ties by row),
// plus the rows where the feature is missing.
struct SortedColumn {
  std::vector<double> values;
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> missing;
};

// Derivatives and current frontier slot of a row; slot -1 means the row is
// out of the round's sample or already sits in a finished leaf.
// Derivatives are held in single precision (sums stay double) so the
// per-row state is 12 bytes and stays cache resident on large tables.
struct RowState {
  float grad;
  float hess;
  std::int32_t slot;
};

struct FrontierNode {
  std::int32_t node;
  GradSum sum;
};

// Splits [0, n) into contiguous ascending chunks, one per worker.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back([&, w] { fn(w * n / workers, (w + 1) * n / workers, w); });
  }
  fn(0, n / workers, 0);
}

std::vector<SortedColumn> presort(const Columns& cols, int threads) {
  std::vector<SortedColumn> sorted(cols.size());
  parallel_chunks(cols.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t f = begin; f < end; ++f) {
      const auto col = cols[f];
      std::vector<std::uint32_t> order;
      order.reserve(col.size());
      auto& out = sorted[f];
      for (std::uint32_t i = 0; i < col.size(); ++i) {
        (std::isnan(col[i]) ? out.missing : order).push_back(i);
      }
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
      out.values.resize(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) out.values[k] = col[order[k]];
      out.rows = std::move(order);
    }
  });
  return sorted;
}

class TreeBuilder {
 public:
  TreeBuilder(const Columns& cols, const std::vector<SortedColumn>& sorted, const TrainConfig& config)
      : cols_(cols), sorted_(sorted), config_(config), params_(config.split_params()) {}

  Tree build(std::span<const GradPair> gpairs, std::span<const std::uint8_t> in_sample,
             std::span<const std::int32_t> features) {
    const std::size_t n = gpairs.size();
    state_.resize(n);
    FrontierNode root{0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      const bool active = in_sample[i] != 0;
      state_[i] = {static_cast<float>(gpairs[i].grad), static_cast<float>(gpairs[i].hess), active ? 0 : -1};
      if (active) root.sum += GradPair{state_[i].grad, state_[i].hess};
    }
    Tree tree;
    std::vector<FrontierNode> frontier{root};
    for (int depth = 0; !frontier.empty(); ++depth) {
      if (depth >= config_.max_depth) {
        for (const auto& fn : frontier) finish_leaf(tree, fn);
        break;
      }
      const auto best = find_splits(frontier, features);
      std::vector<FrontierNode> next;
      std::vector<std::int32_t> first_child(frontier.size(), -1);
      for (std::size_t k = 0; k < frontier.size(); ++k) {
        if (!(best[k].gain > 0.0)) {
          finish_leaf(tree, frontier[k]);
          continue;
        }
        const std::int32_t left =
            tree.split(frontier[k].node, best[k].feature, best[k].threshold, best[k].default_direction);
        first_child[k] = static_cast<std::int32_t>(next.size());
        next.push_back({left, {}});
        next.push_back({left + 1, {}});
      }
      for (std::size_t i = 0; i < n; ++i) {
        RowState& s = state_[i];
        if (s.slot < 0) continue;
        const std::int32_t c = first_child[s.slot];
        if (c < 0) {
          s.slot = -1;
          continue;
        }
        const SplitCandidate& split = best[s.slot];
        const double v = cols_[split.feature][i];
        const bool go_left = std::isnan(v) ? split.default_direction == Direction::left : v < split.threshold;
        s.slot = c + (go_left ? 0 : 1);
        next[s.slot].sum += GradPair{s.grad, s.hess};
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  void finish_leaf(Tree& tree, const FrontierNode& fn) const {
    tree.set_leaf_weight(fn.node, leaf_weight(fn.sum, config_.l2_lambda) * config_.learning_rate);
  }

  std::vector<SplitCandidate> find_splits(const std::vector<FrontierNode>& frontier,
                                          std::span<const std::int32_t> features) {
    const std::size_t k_nodes = frontier.size();
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(config_.threads), features.size()));
    std::vector<std::vector<SplitCandidate>> found(workers, std::vector<SplitCandidate>(k_nodes));
    parallel_chunks(features.size(), config_.threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
      std::vector<SplitScanner> scanners(k_nodes);
      std::vector<GradSum> missing(k_nodes);
      auto& local = found[w];
      for (std::size_t fi = begin; fi < end; ++fi) {
        const std::int32_t f = features[fi];
        const SortedColumn& col = sorted_[f];
        std::fill(missing.begin(), missing.end(), GradSum{});
        for (const auto r : col.missing) {
          const RowState& s = state_[r];
          if (s.slot >= 0) missing[s.slot] += GradPair{s.grad, s.hess};
        }
        for (std::size_t k = 0; k < k_nodes; ++k) scanners[k] = SplitScanner(frontier[k].sum, missing[k], f, &params_);
        const std::size_t m = col.rows.size();
        const std::uint32_t* rows = col.rows.data();
        const double* values = col.values.data();
        for (std::size_t idx = 0; idx < m; ++idx) {
          const RowState& s = state_[rows[idx]];
          if (s.slot < 0) continue;
          scanners[s.slot].push(values[idx], GradPair{s.grad, s.hess});
        }
        for (std::size_t k = 0; k < k_nodes; ++k) {
          if (scanners[k].best().better_than(local[k])) local[k] = scanners[k].best();
        }
      }
    });
    // Workers own ascending feature ranges, so merging in worker order with a
    // strict comparison keeps the lowest-feature tie-break.
    std::vector<SplitCandidate> best = std::move(found[0]);
    for (std::size_t w = 1; w < workers; ++w) {
      for (std::size_t k = 0; k < k_nodes; ++k) {
        if (found[w][k].better_than(best[k])) best[k] = found[w][k];
      }
    }
    return best;
  }

  const Columns& cols_;
  const std::vector<SortedColumn>& sorted_;
  const TrainConfig& config_;
  SplitParams params_;
  std::vector<RowState> state_;
};

Columns numeric_columns(const Dataset& data) {
  Columns cols;
  cols.reserve(data.features());
  for (std::size_t j = 0; j < data.features(); ++j) cols.emplace_back(data.numeric(j));
  return cols;
}

void add_tree_margins(const Tree& tree, const Columns& cols, std::vector<double>& margins) {
  for (std::size_t i = 0; i < margins.size(); ++i) {
    margins[i] += tree.predict([&](std::int32_t f) { return cols[f][i]; });
  }
}

}  // namespace

void TrainConfig::validate() const {
  objective.validate();
  if (max_depth < 0) throw Error("invalid parameter: max_depth must be >= 0");
  if (!(learning_rate > 0.0)) throw Error("invalid parameter: learning_rate must be > 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw Error("invalid parameter: subsample must lie in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    throw Error("invalid parameter: colsample_bytree must lie in (0, 1]");
  }
  if (n_trees < 1) throw Error("invalid parameter: n_trees must be >= 1");
  if (!(l2_lambda >= 0.0)) throw Error("invalid parameter: l2_lambda must be >= 0");
  if (!(min_split_loss >= 0.0)) throw Error("invalid parameter: min_split_loss must be >= 0");
  if (!(min_child_hessian >= 0.0)) throw Error("invalid parameter: min_child_hessian must be >= 0");
  if (threads < 1) throw Error("invalid parameter: threads must be >= 1");
}

bool TrainConfig::operator==(const TrainConfig& o) const {
  return objective == o.objective && max_depth == o.max_depth && learning_rate == o.learning_rate &&
         subsample == o.subsample && colsample_bytree == o.colsample_bytree && n_trees == o.n_trees &&
         l2_lambda == o.l2_lambda && min_split_loss == o.min_split_loss &&
         min_child_hessian == o.min_child_hessian && seed == o.seed;
}

Ensemble::Ensemble(std::vector<Tree> trees, double base_margin, ObjectiveParams objective,
                   std::vector<std::string> feature_names)
    : trees_(std::move(trees)),
      base_margin_(base_margin),
      objective_(std::move(objective)),
      feature_names_(std::move(feature_names)),
      fingerprint_(names_fingerprint(feature_names_)) {}

FitResult fit(const Dataset& train, const TrainConfig& config, const Dataset* eval_set) {
  config.validate();
  if (train.rows() == 0) throw Error("empty dataset");
  const std::size_t pos = train.positives();
  if (pos == 0 || pos == train.rows()) throw Error("single-class training labels");
  if (train.rows() > std::numeric_limits<std::uint32_t>::max()) throw Error("too many rows");

  const Columns cols = numeric_columns(train);
  const auto labels = train.labels();
  const std::size_t n = train.rows();
  const std::size_t n_features = cols.size();
  const auto sorted = presort(cols, config.threads);

  std::optional<Columns> eval_cols;
  std::vector<double> eval_margins;
  if (eval_set != nullptr) {
    if (eval_set->schema().feature_names() != train.schema().feature_names()) throw Error("schema mismatch: eval set");
    eval_cols = numeric_columns(*eval_set);
    eval_margins.assign(eval_set->rows(), 0.0);
  }

  FitResult result{Ensemble({}, 0.0, config.objective, train.schema().feature_names()), {}};
  result.model.set_config(config);
  std::vector<double> margins(n, result.model.base_margin());
  std::vector<GradPair> gpairs;
  std::vector<std::uint8_t> in_sample(n, 1);
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  std::vector<std::size_t> all_features(n_features);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});

  const auto n_rows_sampled =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.subsample * static_cast<double>(n))));
  const auto n_cols_sampled = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.colsample_bytree * static_cast<double>(n_features))));

  TreeBuilder builder(cols, sorted, config);
  for (int round = 0; round < config.n_trees; ++round) {
    grad_hess(config.objective, labels, margins, gpairs);
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(round)));
    if (n_rows_sampled < n) {
      std::fill(in_sample.begin(), in_sample.end(), 0);
      for (auto r : sample_without_replacement(all_rows, n_rows_sampled, rng)) in_sample[r] = 1;
    }
    std::vector<std::int32_t> features;
    if (n_cols_sampled < n_features) {
      for (auto f : sample_without_replacement(all_features, n_cols_sampled, rng)) {
        features.push_back(static_cast<std::int32_t>(f));
      }
      std::sort(features.begin(), features.end());
    } else {
      features.assign(all_features.begin(), all_features.end());
    }

    Tree tree = builder.build(gpairs, in_sample, features);
    add_tree_margins(tree, cols, margins);
    RoundLog entry{round, total_loss(config.objective, labels, margins), std::nullopt};
    if (eval_cols) {
      add_tree_margins(tree, *eval_cols, eval_margins);
      if (eval_set->positives() > 0) entry.eval_auc_pr = metrics::auc_pr(eval_set->labels(), eval_margins);
    }
    result.log.push_back(entry);
    result.model.add_tree(std::move(tree));
  }
  return result;
}

std::vector<double> predict_margin(const Ensemble& model, const Dataset& rows) {
  if (schema_fingerprint(rows.schema()) != model.schema_fingerprint() ||
      rows.schema().feature_names() != model.feature_names()) {
    throw Error("schema mismatch: table columns differ from the model's");
  }
  const Columns cols = numeric_columns(rows);
  std::vector<double> out(rows.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = model.margin([&](std::int32_t f) { return cols[f][i]; });
  }
  return out;
}

std::vector<double> predict_proba(const Ensemble& model, const Dataset& rows) {
  auto m = predict_margin(model, rows);
  for (double& v : m) v = sigmoid(v);
  return m;
}

std::vector<std::uint8_t> predict_label(const Ensemble& model, const Dataset& rows, double threshold) {
  return metrics::threshold_predictions(predict_proba(model, rows), threshold);
}

}  // namespace imbboost::gbt
