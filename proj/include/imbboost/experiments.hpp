#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imbboost/booster.hpp"
#include "imbboost/dataset.hpp"
#include "imbboost/metrics.hpp"
#include "imbboost/stats.hpp"
#include "imbboost/transform.hpp"

namespace imbboost::harness {

// How a configuration is chosen inside one training partition.
enum class Approach { vanilla, rs_tuned, rs_scale };

std::string_view to_string(Approach a);
Approach approach_from_string(std::string_view text);

struct TuningPlan {
  std::size_t rs_trials = 25;
  std::size_t scale_trials = 6;
  std::size_t folds = 5;
};

struct GridCell {
  std::size_t size = 0;
  double distribution = 0.0;  // positive fraction
  Approach approach = Approach::vanilla;
  std::vector<double> fold_f1;
  double f1_mean = 0.0;
  double f1_std = 0.0;
  double baseline_prc = 0.0;
  // Fold F1s against the constant baseline; absent when undefined.
  std::optional<stats::TTest> vs_baseline;
  gbt::TrainConfig chosen;
  double seconds = 0.0;
};

struct GridOptions {
  std::vector<std::size_t> sizes = {1000, 10000, 100000};
  std::vector<double> distributions = {0.50, 0.45, 0.25, 0.05};
  std::vector<Approach> approaches = {Approach::vanilla, Approach::rs_tuned, Approach::rs_scale};
  TuningPlan tuning;
  gbt::TrainConfig base;
  prep::MissingPolicy missing;
  std::uint64_t seed = 0;
};

// Folds used for a subset of the given size: 2 from 100K rows, else 5.
std::size_t grid_folds(std::size_t size);

// Every (size, distribution, approach) cell, in that nesting order. Each
// cell draws its subset and folds from its own derived seed.
std::vector<GridCell> run_grid(const Dataset& source, const GridOptions& options);

struct SamplingCell {
  double distribution = 0.0;
  std::string arm;  // vanilla | sampling+vanilla | rs_tuned | sampling+rs_tuned
  metrics::ConfusionMatrix cm;
  metrics::Score f1;
  metrics::Score precision;
  metrics::Score recall;
  double auc_pr = 0.0;
  double baseline_prc = 0.0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::uint64_t test_hash = 0;
  metrics::PRCurve curve;
};

struct SamplingOptions {
  std::vector<double> distributions = {0.50, 0.45, 0.25, 0.05};
  std::size_t size = 10000;
  double train_fraction = 0.8;
  double target_pos_fraction = 0.5;
  TuningPlan tuning;
  gbt::TrainConfig base;
  prep::MissingPolicy missing;
  std::uint64_t seed = 0;
};

// Per distribution: a time-ordered subset split 80/20 by time, then four
// arms. Only the training partition is ever resampled. With
// tuning.rs_trials == 0 the two tuned arms are skipped.
std::vector<SamplingCell> sampling_experiment(const Dataset& data, const SamplingOptions& options);

struct ObjectiveRow {
  std::string family;  // vanilla | focal | weighted
  std::optional<double> parameter;
  std::vector<double> fold_f1;
  double f1_mean = 0.0;
  double f1_std = 0.0;
  bool best_of_family = false;
};

struct ObjectiveOptions {
  std::vector<double> gammas = {1, 2, 3};
  std::vector<double> alphas = {1, 2, 3, 4};
  std::size_t folds = 5;
  gbt::TrainConfig base;
  prep::MissingPolicy missing;
  std::uint64_t seed = 0;
};

// Fold-F1 comparison of vanilla, focal and weighted losses on shared folds.
// The best row per family (highest mean F1, first on ties) is flagged.
std::vector<ObjectiveRow> imbalance_objective_experiment(const Dataset& data, const ObjectiveOptions& options);

enum class DriftMode { moving_window, train_once };

std::string_view to_string(DriftMode m);

struct DriftSection {
  std::size_t index = 0;
  std::size_t train_begin = 0;
  std::size_t train_end = 0;
  std::size_t test_begin = 0;
  std::size_t test_end = 0;
  double f1 = 0.0;
  double baseline_prc = 0.0;
  gbt::TrainConfig chosen;
};

struct DriftRun {
  DriftMode mode = DriftMode::moving_window;
  std::vector<DriftSection> sections;
  double f1_mean = 0.0;
  double f1_std = 0.0;
  // Over all test sections pooled.
  metrics::PRCurve curve;
};

struct DriftOptions {
  std::size_t train_window = 10000;
  std::size_t test_window = 2500;
  std::size_t sections = 5;
  // Tuning inside each training window: "rs", "scale" or "none".
  std::string space = "rs";
  std::size_t n_trials = 0;  // 0: the space default (25 for rs, 6 for scale)
  std::size_t folds = 5;
  gbt::TrainConfig base;
  prep::MissingPolicy missing;
  std::uint64_t seed = 0;
};

// Test sections are adjacent blocks after the first training window.
// Moving window retrains on the rows right before each section; train
// once fits on the first window only.
DriftRun drift_experiment(const Dataset& stream, DriftMode mode, const DriftOptions& options);

struct ExperimentResult {
  std::vector<GridCell> grid;
  std::vector<SamplingCell> sampling;
  std::vector<ObjectiveRow> objectives;
  std::vector<DriftRun> drift;

  bool empty() const { return grid.empty() && sampling.empty() && objectives.empty() && drift.empty(); }
};

}  // namespace imbboost::harness
