#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbboost/dataset.hpp"
#include "imbboost/objective.hpp"
#include "imbboost/tree.hpp"

namespace imbboost::gbt {

// Defaults reproduce the vanilla configuration: logistic loss, depth 6,
// learning rate 0.3, no row or column subsampling, 100 trees.
struct TrainConfig {
  ObjectiveParams objective;
  int max_depth = 6;
  double learning_rate = 0.3;
  double subsample = 1.0;
  double colsample_bytree = 1.0;
  int n_trees = 100;
  double l2_lambda = 1.0;
  double min_split_loss = 0.0;
  double min_child_hessian = 1.0;
  std::uint64_t seed = 0;
  // Worker cap for split finding. Never affects the fitted model.
  int threads = 1;

  void validate() const;
  SplitParams split_params() const { return {l2_lambda, min_split_loss, min_child_hessian}; }

  // Compares everything that shapes the model; threads is ignored.
  bool operator==(const TrainConfig& other) const;
};

class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::vector<Tree> trees, double base_margin, ObjectiveParams objective,
           std::vector<std::string> feature_names);

  const std::vector<Tree>& trees() const { return trees_; }
  double base_margin() const { return base_margin_; }
  const ObjectiveParams& objective() const { return objective_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& schema_fingerprint() const { return fingerprint_; }

  // Hyper-parameters the model was fitted with, kept for the record.
  const std::optional<TrainConfig>& config() const { return config_; }
  void set_config(const TrainConfig& config) { config_ = config; }

  void add_tree(Tree tree) { trees_.push_back(std::move(tree)); }

  template <typename ValueOf>
  double margin(ValueOf&& value) const {
    double m = base_margin_;
    for (const Tree& t : trees_) m += t.predict(value);
    return m;
  }

  bool operator==(const Ensemble&) const = default;

 private:
  std::vector<Tree> trees_;
  double base_margin_ = 0.0;
  ObjectiveParams objective_;
  std::vector<std::string> feature_names_;
  std::string fingerprint_;
  std::optional<TrainConfig> config_;
};

struct RoundLog {
  int round = 0;
  double train_loss = 0.0;
  std::optional<double> eval_auc_pr;
};

struct FitResult {
  Ensemble model;
  std::vector<RoundLog> log;
};

// Second-order boosting with exact greedy splits. Every column of `train`
// must hold numbers (run the transforms first); NaN cells are routed by the
// learned default direction. With an eval set, AUC-PR is logged per round.
FitResult fit(const Dataset& train, const TrainConfig& config, const Dataset* eval_set = nullptr);

// base_margin + sum of leaf scores; throws Error("schema mismatch") when the
// table's columns differ from the model's.
std::vector<double> predict_margin(const Ensemble& model, const Dataset& rows);
std::vector<double> predict_proba(const Ensemble& model, const Dataset& rows);
std::vector<std::uint8_t> predict_label(const Ensemble& model, const Dataset& rows, double threshold = 0.5);

}  // namespace imbboost::gbt
