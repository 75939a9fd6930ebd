#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imbboost/booster.hpp"
#include "imbboost/dataset.hpp"
#include "imbboost/pipeline.hpp"
#include "imbboost/transform.hpp"

namespace imbboost::tuning {

// Finite value lists per hyper-parameter. An empty list leaves the base
// configuration's value alone. Points of the cross product are numbered in
// mixed radix with the first list varying slowest.
struct SearchSpace {
  std::vector<int> max_depth;
  std::vector<double> learning_rate;
  std::vector<double> subsample;
  std::vector<double> colsample_bytree;
  std::vector<int> n_trees;
  std::vector<double> scale_pos_weight;
  std::vector<double> weighted_alpha;
  std::vector<double> focal_gamma;

  std::size_t size() const;
  gbt::TrainConfig at(std::size_t point, const gbt::TrainConfig& base) const;
  void validate() const;  // at least one list; every config valid

  static SearchSpace rs_grid();
  static SearchSpace scale_grid();
  static SearchSpace named(const std::string& name);  // "rs" | "scale"
};

using Fold = std::vector<std::size_t>;

// k disjoint folds covering every row, each sorted ascending. Stratified
// folds deal each class round-robin after a seeded shuffle.
std::vector<Fold> kfold_split(const Dataset& data, std::size_t k, std::uint64_t seed, bool stratified = true);

// Rows of `data` outside the fold, ascending.
Fold complement(const Fold& fold, std::size_t rows);

struct FoldScore {
  double auc_pr = 0.0;
  double f1 = 0.0;  // threshold 0.5, undefined counted as 0
};

struct CVScores {
  std::vector<FoldScore> folds;
  // Preprocessing fitted inside each fold's training rows.
  std::vector<prep::TransformState> transforms;
  double auc_mean = 0.0;
  double auc_std = 0.0;
  double f1_mean = 0.0;
  double f1_std = 0.0;

  std::vector<double> f1s() const;
  std::vector<double> aucs() const;
};

// Fits the whole pipeline on each fold's training rows and scores the
// held-out rows.
CVScores cross_validate(const Dataset& raw, const std::vector<Fold>& folds, const gbt::TrainConfig& config,
                        const prep::MissingPolicy& missing = {});

struct Trial {
  std::size_t index = 0;  // order of evaluation
  std::size_t point = 0;  // position in the search space
  gbt::TrainConfig config;
  CVScores scores;
};

struct CVResult {
  std::vector<Trial> trials;
  std::size_t folds = 0;

  // Best mean AUC-PR, earliest trial on ties. Throws "no winner" when empty.
  const Trial& winner() const;
};

struct SearchOptions {
  std::size_t n_trials = 25;
  std::size_t folds = 5;
  bool stratified = true;
  std::uint64_t seed = 0;
  gbt::TrainConfig base;
  prep::MissingPolicy missing;
};

// Evaluates n_trials distinct points drawn uniformly from the space.
CVResult random_search(const Dataset& raw, const SearchSpace& space, const SearchOptions& options);

// Every point in order. An exhaustive random_search picks the same winner.
CVResult grid_search(const Dataset& raw, const SearchSpace& space, const SearchOptions& options);

// Refits the winning configuration on all of `raw`.
FittedPipeline fit_best(const Dataset& raw, const CVResult& result, const prep::MissingPolicy& missing = {});

std::string trial_log_csv(const CVResult& result);
void write_trial_log(const std::filesystem::path& path, const CVResult& result);

}  // namespace imbboost::tuning
