#include "imbboost/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "imbboost/error.hpp"
#include "imbboost/partition.hpp"
#include "imbboost/random.hpp"
#include "imbboost/sampling.hpp"
#include "imbboost/tuning.hpp"

namespace imbboost::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t fraction_tag(double f) { return static_cast<std::uint64_t>(std::llround(f * 1e6)); }

tuning::SearchOptions search_options(std::size_t trials, std::size_t folds,
                                     const gbt::TrainConfig& base, const prep::MissingPolicy& missing,
                                     std::uint64_t seed) {
  tuning::SearchOptions o;
  o.n_trials = trials;
  o.folds = folds;
  o.seed = seed;
  o.base = base;
  o.missing = missing;
  return o;
}

// Picks a configuration for `train` with the approach; returns the chosen
// config and its CV scores on `folds` folds.
std::pair<gbt::TrainConfig, tuning::CVScores> choose(const Dataset& train, Approach approach, const TuningPlan& plan,
                                                     std::size_t folds, const gbt::TrainConfig& base,
                                                     const prep::MissingPolicy& missing, std::uint64_t seed) {
  if (approach == Approach::vanilla) {
    const auto split = tuning::kfold_split(train, folds, seed);
    return {base, tuning::cross_validate(train, split, base, missing)};
  }
  const bool rs = approach == Approach::rs_tuned;
  const auto space = rs ? tuning::SearchSpace::rs_grid() : tuning::SearchSpace::scale_grid();
  const auto result = tuning::random_search(
      train, space, search_options(rs ? plan.rs_trials : plan.scale_trials, folds, base, missing, seed));
  const auto& w = result.winner();
  return {w.config, w.scores};
}

struct TestScore {
  metrics::ConfusionMatrix cm;
  double f1 = 0.0;
  double auc = 0.0;
  metrics::PRCurve curve;
};

TestScore score(std::span<const std::uint8_t> labels, std::span<const double> proba) {
  TestScore s;
  s.cm = metrics::confusion(labels, metrics::threshold_predictions(proba, 0.5));
  s.f1 = metrics::f1_at(labels, proba, 0.5);
  bool any_pos = false;
  for (auto y : labels) any_pos = any_pos || y;
  if (any_pos) {
    s.curve = metrics::pr_curve(labels, proba);
    s.auc = s.curve.auc;
  }
  return s;
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> r(end - begin);
  std::iota(r.begin(), r.end(), begin);
  return r;
}

}  // namespace

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::vanilla: return "vanilla";
    case Approach::rs_tuned: return "rs_tuned";
    case Approach::rs_scale: return "rs_scale";
  }
  return "vanilla";
}

Approach approach_from_string(std::string_view text) {
  if (text == "vanilla") return Approach::vanilla;
  if (text == "rs_tuned") return Approach::rs_tuned;
  if (text == "rs_scale") return Approach::rs_scale;
  throw Error("unknown approach: " + std::string(text));
}

std::string_view to_string(DriftMode m) { return m == DriftMode::moving_window ? "moving_window" : "train_once"; }

std::size_t grid_folds(std::size_t size) { return size >= 100000 ? 2 : 5; }

std::vector<GridCell> run_grid(const Dataset& source, const GridOptions& options) {
  std::vector<GridCell> cells;
  for (std::size_t size : options.sizes) {
    for (double dist : options.distributions) {
      const std::uint64_t cell_seed = derive_seed(options.seed, size, fraction_tag(dist));
      const Dataset subset = prep::stratified_subset(source, size, dist, cell_seed);
      const std::size_t k = grid_folds(size);
      for (Approach approach : options.approaches) {
        const auto start = Clock::now();
        auto [config, scores] = choose(subset, approach, options.tuning, k, options.base, options.missing, cell_seed);
        GridCell cell;
        cell.size = size;
        cell.distribution = dist;
        cell.approach = approach;
        cell.fold_f1 = scores.f1s();
        cell.f1_mean = scores.f1_mean;
        cell.f1_std = scores.f1_std;
        cell.baseline_prc = metrics::baseline_prc(subset.labels());
        const std::vector<double> baseline(cell.fold_f1.size(), cell.baseline_prc);
        try {
          cell.vs_baseline = stats::ttest_unpaired(cell.fold_f1, baseline);
        } catch (const Error&) {
          cell.vs_baseline.reset();
        }
        cell.chosen = config;
        cell.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<SamplingCell> sampling_experiment(const Dataset& data, const SamplingOptions& options) {
  if (!data.has_time()) throw Error("missing time index: the sampling experiment splits by time");
  std::vector<SamplingCell> cells;
  for (double dist : options.distributions) {
    const std::uint64_t cell_seed = derive_seed(options.seed, fraction_tag(dist));
    const Dataset subset = prep::stratified_subset(data, options.size, dist, cell_seed);
    const auto split = prep::time_split_fraction(subset, options.train_fraction);
    sampling::SamplingPlan plan;
    plan.target_pos_fraction = options.target_pos_fraction;
    plan.seed = cell_seed;
    const Dataset sampled = sampling::balance_preserve_size(split.train, plan).data;

    struct Arm {
      const char* name;
      const Dataset* train;
      bool tuned;
    };
    const Arm arms[] = {{"vanilla", &split.train, false},
                        {"sampling+vanilla", &sampled, false},
                        {"rs_tuned", &split.train, true},
                        {"sampling+rs_tuned", &sampled, true}};
    for (const Arm& arm : arms) {
      if (arm.tuned && options.tuning.rs_trials == 0) continue;
      gbt::TrainConfig config = options.base;
      if (arm.tuned) {
        const auto result = tuning::random_search(
            *arm.train, tuning::SearchSpace::rs_grid(),
            search_options(options.tuning.rs_trials, options.tuning.folds, options.base,
                           options.missing, cell_seed));
        config = result.winner().config;
      }
      const auto pipeline = tuning::fit_pipeline(*arm.train, config, options.missing);
      const auto proba = pipeline.predict_proba(split.test);
      TestScore s = score(split.test.labels(), proba);
      SamplingCell cell;
      cell.distribution = dist;
      cell.arm = arm.name;
      cell.cm = s.cm;
      const auto r = metrics::report(s.cm);
      cell.f1 = r.f1;
      cell.precision = r.precision;
      cell.recall = r.recall;
      cell.auc_pr = s.auc;
      cell.baseline_prc = metrics::baseline_prc(split.test.labels());
      cell.train_rows = arm.train->rows();
      cell.test_rows = split.test.rows();
      cell.test_hash = content_hash(split.test);
      cell.curve = std::move(s.curve);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<ObjectiveRow> imbalance_objective_experiment(const Dataset& data, const ObjectiveOptions& options) {
  const auto folds = tuning::kfold_split(data, options.folds, options.seed);
  std::vector<ObjectiveRow> rows;
  auto run = [&](const std::string& family, std::optional<double> param, const gbt::TrainConfig& config) {
    const auto scores = tuning::cross_validate(data, folds, config, options.missing);
    ObjectiveRow row;
    row.family = family;
    row.parameter = param;
    row.fold_f1 = scores.f1s();
    row.f1_mean = scores.f1_mean;
    row.f1_std = scores.f1_std;
    rows.push_back(std::move(row));
  };
  gbt::TrainConfig vanilla = options.base;
  vanilla.objective.weighted_alpha.reset();
  vanilla.objective.focal_gamma.reset();
  run("vanilla", std::nullopt, vanilla);
  for (double g : options.gammas) {
    gbt::TrainConfig c = vanilla;
    c.objective.focal_gamma = g;
    run("focal", g, c);
  }
  for (double a : options.alphas) {
    gbt::TrainConfig c = vanilla;
    c.objective.weighted_alpha = a;
    run("weighted", a, c);
  }
  for (const char* family : {"vanilla", "focal", "weighted"}) {
    ObjectiveRow* best = nullptr;
    for (auto& r : rows) {
      if (r.family == family && (!best || r.f1_mean > best->f1_mean)) best = &r;
    }
    if (best) best->best_of_family = true;
  }
  return rows;
}

DriftRun drift_experiment(const Dataset& stream, DriftMode mode, const DriftOptions& options) {
  const std::size_t tw = options.train_window;
  const std::size_t sw = options.test_window;
  if (tw == 0 || sw == 0 || options.sections == 0) throw Error("invalid drift geometry: windows must be non-empty");
  const std::size_t needed = tw + options.sections * sw;
  if (stream.rows() < needed) {
    throw Error("stream too short: need " + std::to_string(needed) + " rows, have " + std::to_string(stream.rows()));
  }

  auto fit_window = [&](std::size_t begin, std::size_t end, std::uint64_t seed) {
    const Dataset train = stream.select(range(begin, end));
    gbt::TrainConfig config = options.base;
    if (options.space != "none") {
      const auto space = tuning::SearchSpace::named(options.space);
      std::size_t trials = options.n_trials;
      if (trials == 0) trials = options.space == "rs" ? 25 : space.size();
      const auto o = search_options(trials, options.folds, options.base, options.missing, seed);
      config = tuning::random_search(train, space, o).winner().config;
    }
    return std::make_pair(tuning::fit_pipeline(train, config, options.missing), config);
  };

  DriftRun run;
  run.mode = mode;
  std::vector<std::uint8_t> all_labels;
  std::vector<double> all_proba;
  std::optional<std::pair<tuning::FittedPipeline, gbt::TrainConfig>> once;
  for (std::size_t s = 0; s < options.sections; ++s) {
    DriftSection sec;
    sec.index = s;
    sec.test_begin = tw + s * sw;
    sec.test_end = sec.test_begin + sw;
    if (mode == DriftMode::moving_window) {
      sec.train_begin = sec.test_begin - tw;
      sec.train_end = sec.test_begin;
    } else {
      sec.train_begin = 0;
      sec.train_end = tw;
    }
    const auto* fitted = &once;
    std::optional<std::pair<tuning::FittedPipeline, gbt::TrainConfig>> moving;
    if (mode == DriftMode::moving_window) {
      // The window seed depends on the window start, so section 0 matches
      // the train-once fit exactly.
      moving = fit_window(sec.train_begin, sec.train_end, derive_seed(options.seed, sec.train_begin));
      fitted = &moving;
    } else if (!once) {
      once = fit_window(0, tw, derive_seed(options.seed, 0));
    }
    const Dataset test = stream.select(range(sec.test_begin, sec.test_end));
    const auto proba = (*fitted)->first.predict_proba(test);
    sec.f1 = metrics::f1_at(test.labels(), proba, 0.5);
    sec.baseline_prc = metrics::baseline_prc(test.labels());
    sec.chosen = (*fitted)->second;
    all_labels.insert(all_labels.end(), test.labels().begin(), test.labels().end());
    all_proba.insert(all_proba.end(), proba.begin(), proba.end());
    run.sections.push_back(sec);
  }
  std::vector<double> f1s;
  for (const auto& s : run.sections) f1s.push_back(s.f1);
  run.f1_mean = stats::mean(f1s);
  run.f1_std = stats::population_std(f1s);
  if (std::find(all_labels.begin(), all_labels.end(), 1) != all_labels.end()) {
    run.curve = metrics::pr_curve(all_labels, all_proba);
  }
  return run;
}

}  // namespace imbboost::harness
