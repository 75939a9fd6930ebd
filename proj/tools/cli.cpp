#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <algorithm>

#include <CLI11.hpp>

#include "imbboost/booster.hpp"
#include "imbboost/csv.hpp"
#include "imbboost/error.hpp"
#include "imbboost/experiments.hpp"
#include "imbboost/metrics.hpp"
#include "imbboost/model_io.hpp"
#include "imbboost/partition.hpp"
#include "imbboost/report.hpp"
#include "imbboost/sampling.hpp"
#include "imbboost/synth.hpp"
#include "imbboost/transform.hpp"
#include "imbboost/tuning.hpp"

namespace imbboost::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out = ".";
};

struct TrainFlags {
  gbt::TrainConfig config;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::string missing = "fill";
  double fill = 1.0;

  gbt::TrainConfig make(const Globals& g) const {
    gbt::TrainConfig c = config;
    c.objective.weighted_alpha = alpha;
    c.objective.focal_gamma = gamma;
    c.seed = g.seed;
    c.threads = g.threads;
    c.validate();
    return c;
  }

  prep::MissingPolicy policy() const {
    prep::MissingPolicy p;
    p.mode = missing == "native" ? prep::MissingMode::default_direction : prep::MissingMode::fill;
    p.fill_value = fill;
    return p;
  }
};

void add_train_flags(CLI::App* sub, TrainFlags& f) {
  auto& c = f.config;
  sub->add_option("--max-depth", c.max_depth, "Maximum tree depth")->capture_default_str();
  sub->add_option("--learning-rate", c.learning_rate, "Shrinkage applied to leaf weights")->capture_default_str();
  sub->add_option("--subsample", c.subsample, "Row fraction per tree")->capture_default_str();
  sub->add_option("--colsample-bytree", c.colsample_bytree, "Column fraction per tree")->capture_default_str();
  sub->add_option("--n-trees", c.n_trees, "Boosting rounds")->capture_default_str();
  sub->add_option("--lambda", c.l2_lambda, "L2 penalty on leaf weights")->capture_default_str();
  sub->add_option("--min-split-loss", c.min_split_loss, "Minimum gain to split")->capture_default_str();
  sub->add_option("--min-child-hessian", c.min_child_hessian, "Minimum hessian per child")->capture_default_str();
  sub->add_option("--scale-pos-weight", c.objective.scale_pos_weight, "Positive class weight")->capture_default_str();
  sub->add_option("--alpha", f.alpha, "Weighted loss alpha");
  sub->add_option("--gamma", f.gamma, "Focal loss gamma");
  sub->add_option("--missing", f.missing, "Missing values: fill or native")
      ->check(CLI::IsMember({"fill", "native"}))
      ->capture_default_str();
  sub->add_option("--fill", f.fill, "Fill value for missing cells (scaled units)")->capture_default_str();
}

void require_file(const std::string& path, const char* what) {
  if (!fs::exists(path)) throw Error(std::string("missing file: ") + what + " " + path);
}

fs::path out_dir(const Globals& g) {
  fs::path dir = g.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("unwritable directory: " + dir.string());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

// Raw table + schema, or a prepared table described by a transform file.
struct Input {
  std::string data;
  std::string schema;
  std::string state;
};

void write_fit_log(const fs::path& path, const std::vector<gbt::RoundLog>& log) {
  std::ostringstream s;
  s << "round,train_loss,eval_auc_pr\n";
  for (const auto& r : log) {
    s << r.round << ',' << prep::format_number(r.train_loss) << ','
      << (r.eval_auc_pr ? prep::format_number(*r.eval_auc_pr) : "") << '\n';
  }
  write_text(path, s.str());
}

std::string version_text() {
  return "imbboost 1.0.0 (model format " + std::to_string(gbt::kModelFormatVersion) + ", transform format " +
         std::to_string(prep::kTransformFormatVersion) + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient-boosted trees for imbalanced binary classification", "imbboost"};
  app.set_config("--config", "", "Key-value configuration file; flags override it");
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker cap for split finding")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Fit transforms on a time-split training part and write both parts");
  Input prep_in;
  double split_fraction = 0.8;
  TrainFlags prep_flags;
  prepare->add_option("--data", prep_in.data, "Raw CSV")->required();
  prepare->add_option("--schema", prep_in.schema, "Schema JSON")->required();
  prepare->add_option("--split", split_fraction, "Training fraction, split on the time column")->capture_default_str();
  prepare->add_option("--missing", prep_flags.missing, "Missing values: fill or native")
      ->check(CLI::IsMember({"fill", "native"}));
  prepare->add_option("--fill", prep_flags.fill, "Fill value for missing cells (scaled units)");

  // train
  auto* train = app.add_subcommand("train", "Fit a model");
  Input train_in;
  std::string eval_path;
  TrainFlags train_flags;
  train->add_option("--data", train_in.data, "Training CSV")->required();
  auto* schema_opt = train->add_option("--schema", train_in.schema, "Schema JSON for a raw table");
  auto* state_opt = train->add_option("--state", train_in.state, "Transform file for a prepared table");
  schema_opt->excludes(state_opt);
  train->add_option("--eval", eval_path, "Evaluation CSV in the same format; AUC-PR logged per round");
  add_train_flags(train, train_flags);

  // predict
  auto* predict = app.add_subcommand("predict", "Score a table");
  std::string model_path, predict_data;
  bool prepared = false;
  double predict_threshold = 0.5;
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--data", predict_data, "CSV to score")->required();
  predict->add_flag("--prepared", prepared, "The table is already transformed");
  predict->add_option("--threshold", predict_threshold, "Probability threshold for labels")->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Metrics from a scores file");
  std::string scores_path, labels_path;
  double eval_threshold = 0.5;
  evaluate->add_option("--scores", scores_path, "CSV with label and probability or prediction columns")->required();
  evaluate->add_option("--labels", labels_path, "Optional CSV whose label column overrides the scores file");
  evaluate->add_option("--threshold", eval_threshold, "Probability threshold")->capture_default_str();

  // tune
  auto* tune = app.add_subcommand("tune", "Random search with cross-validation");
  Input tune_in;
  std::string space_name = "rs";
  std::size_t trials = 0;
  std::size_t folds = 5;
  TrainFlags tune_flags;
  tune->add_option("--data", tune_in.data, "Raw CSV")->required();
  tune->add_option("--schema", tune_in.schema, "Schema JSON")->required();
  tune->add_option("--space", space_name, "Search space: rs or scale")
      ->check(CLI::IsMember({"rs", "scale"}))
      ->capture_default_str();
  tune->add_option("--trials", trials, "Trials (default 25 for rs, all 6 for scale)");
  tune->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
  add_train_flags(tune, tune_flags);

  // sample
  auto* sample = app.add_subcommand("sample", "Resample a training table");
  Input sample_in;
  std::string strategy = "combined";
  double target = 0.5;
  sample->add_option("--data", sample_in.data, "Raw CSV")->required();
  sample->add_option("--schema", sample_in.schema, "Schema JSON")->required();
  sample->add_option("--strategy", strategy, "under, over or combined")
      ->check(CLI::IsMember({"under", "over", "combined"}))
      ->capture_default_str();
  sample->add_option("--target", target, "Positive fraction after resampling")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic table and its schema");
  harness::SynthSpec synth_spec;
  std::size_t drift_onset = 0;
  double drift_magnitude = 0.0;
  auto add_synth_flags = [&](CLI::App* sub) {
    sub->add_option("--rows", synth_spec.n_rows, "Row count")->capture_default_str();
    sub->add_option("--numeric", synth_spec.n_numeric, "Numeric columns")->capture_default_str();
    sub->add_option("--categorical", synth_spec.n_categorical, "Categorical columns")->capture_default_str();
    sub->add_option("--tokens", synth_spec.n_tokens, "Tokens per categorical column")->capture_default_str();
    sub->add_option("--pos-fraction", synth_spec.pos_fraction, "Positive fraction")->capture_default_str();
    sub->add_option("--separation", synth_spec.class_separation, "Distance between class means")
        ->capture_default_str();
    sub->add_option("--missing-rate", synth_spec.missing_rate, "Fraction of missing cells")->capture_default_str();
    sub->add_option("--drift-onset", drift_onset, "First shifted row (with --drift-magnitude)");
    sub->add_option("--drift-magnitude", drift_magnitude, "Mean shift from the onset on");
  };
  add_synth_flags(synth);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run one of the experiments and write a report");
  std::string kind;
  Input exp_in;
  TrainFlags exp_flags;
  std::vector<std::size_t> sizes = {1000, 10000, 100000};
  std::vector<double> distributions = {0.50, 0.45, 0.25, 0.05};
  std::vector<std::string> approaches = {"vanilla", "rs_tuned", "rs_scale"};
  harness::TuningPlan plan;
  std::size_t sample_size = 10000;
  std::string mode = "both";
  harness::DriftOptions drift_opts;
  experiment->add_option("--kind", kind, "grid, sampling, imbalance or drift")
      ->required()
      ->check(CLI::IsMember({"grid", "sampling", "imbalance", "drift"}));
  experiment->add_option("--data", exp_in.data, "Source CSV (synthetic data when omitted)");
  experiment->add_option("--schema", exp_in.schema, "Schema JSON for --data");
  experiment->add_option("--sizes", sizes, "Grid subset sizes")->delimiter(',');
  experiment->add_option("--distributions", distributions, "Positive fractions")->delimiter(',');
  experiment->add_option("--approaches", approaches, "vanilla, rs_tuned, rs_scale")
      ->delimiter(',')
      ->check(CLI::IsMember({"vanilla", "rs_tuned", "rs_scale"}));
  experiment->add_option("--rs-trials", plan.rs_trials, "Trials for the rs space")->capture_default_str();
  experiment->add_option("--scale-trials", plan.scale_trials, "Trials for the scale space")->capture_default_str();
  experiment->add_option("--folds", plan.folds, "Folds for tuning inside sampling arms and drift windows")
      ->capture_default_str();
  experiment->add_option("--sample-size", sample_size, "Subset size for the sampling experiment")
      ->capture_default_str();
  experiment->add_option("--mode", mode, "Drift protocol: moving, once or both")
      ->check(CLI::IsMember({"moving", "once", "both"}))
      ->capture_default_str();
  experiment->add_option("--space", drift_opts.space, "Tuning space inside drift windows: rs, scale or none")
      ->check(CLI::IsMember({"rs", "scale", "none"}))
      ->capture_default_str();
  experiment->add_option("--trials", drift_opts.n_trials, "Trials inside drift windows (0: space default)");
  experiment->add_option("--train-window", drift_opts.train_window, "Drift training rows")->capture_default_str();
  experiment->add_option("--test-window", drift_opts.test_window, "Drift test rows")->capture_default_str();
  experiment->add_option("--sections", drift_opts.sections, "Drift test sections")->capture_default_str();
  add_train_flags(experiment, exp_flags);
  // Without --data the source is synthetic, shaped by the synth flags.
  add_synth_flags(experiment);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (drift_magnitude != 0.0) synth_spec.drift = harness::DriftSpec{drift_onset, drift_magnitude};
    synth_spec.seed = g.seed;

    if (*prepare) {
      require_file(prep_in.data, "data");
      require_file(prep_in.schema, "schema");
      const auto schema = load_schema(prep_in.schema);
      const Dataset raw = prep::load_csv(prep_in.data, schema);
      const auto split = prep::time_split_fraction(raw, split_fraction);
      const auto state = prep::fit_transform(split.train, prep_flags.policy());
      const fs::path dir = out_dir(g);
      prep::write_csv(dir / "train.csv", prep::apply_transform(state, split.train));
      prep::write_csv(dir / "test.csv", prep::apply_transform(state, split.test));
      prep::save_transform(dir / "transform.json", state);
      out << "prepared " << split.train.rows() << " training and " << split.test.rows() << " test rows in "
          << dir.string() << '\n';
    } else if (*train) {
      require_file(train_in.data, "data");
      if (train_in.schema.empty() == train_in.state.empty()) throw Error("train needs exactly one of --schema, --state");
      const auto config = train_flags.make(g);
      prep::TransformState state;
      Dataset table;
      std::optional<Dataset> eval;
      if (!train_in.schema.empty()) {
        require_file(train_in.schema, "schema");
        const Dataset raw = prep::load_csv(train_in.data, load_schema(train_in.schema));
        state = prep::fit_transform(raw, train_flags.policy());
        table = prep::apply_transform(state, raw);
        if (!eval_path.empty()) {
          require_file(eval_path, "eval");
          eval = prep::apply_transform(state, prep::load_csv(eval_path, state.schema));
        }
      } else {
        require_file(train_in.state, "state");
        state = prep::load_transform(train_in.state);
        table = prep::load_csv(train_in.data, state.prepared_schema());
        if (!eval_path.empty()) {
          require_file(eval_path, "eval");
          eval = prep::load_csv(eval_path, state.prepared_schema());
        }
      }
      const auto result = gbt::fit(table, config, eval ? &*eval : nullptr);
      const fs::path dir = out_dir(g);
      gbt::save_model(dir / "model.json", {result.model, state});
      write_fit_log(dir / "fit_log.csv", result.log);
      out << "trained " << result.model.trees().size() << " trees on " << table.rows() << " rows; model at "
          << (dir / "model.json").string() << '\n';
    } else if (*predict) {
      require_file(model_path, "model");
      require_file(predict_data, "data");
      const auto file = gbt::load_model(model_path);
      if (!file.transform) throw Error("model file has no transform; cannot read the table's columns");
      Dataset table;
      if (prepared) {
        table = prep::load_csv(predict_data, file.transform->prepared_schema());
      } else {
        table = prep::apply_transform(*file.transform, prep::load_csv(predict_data, file.transform->schema));
      }
      const auto proba = gbt::predict_proba(file.model, table);
      std::ostringstream s;
      s << "label,probability,prediction\n";
      for (std::size_t i = 0; i < proba.size(); ++i) {
        s << int(table.labels()[i]) << ',' << prep::format_number(proba[i]) << ','
          << (proba[i] >= predict_threshold ? 1 : 0) << '\n';
      }
      const fs::path dir = out_dir(g);
      write_text(dir / "scores.csv", s.str());
      out << "scored " << proba.size() << " rows into " << (dir / "scores.csv").string() << '\n';
    } else if (*evaluate) {
      require_file(scores_path, "scores");
      const auto table = prep::read_csv(scores_path);
      std::vector<std::uint8_t> labels;
      auto parse_label = [](const std::string& cell) -> std::uint8_t {
        if (cell == "0") return 0;
        if (cell == "1") return 1;
        throw Error("non-binary label: '" + cell + "'");
      };
      if (!labels_path.empty()) {
        require_file(labels_path, "labels");
        const auto lt = prep::read_csv(labels_path);
        const auto c = lt.column("label");
        for (const auto& row : lt.rows) labels.push_back(parse_label(row.at(c)));
      } else {
        const auto c = table.column("label");
        for (const auto& row : table.rows) labels.push_back(parse_label(row.at(c)));
      }
      if (labels.size() != table.rows.size()) throw Error("length mismatch: labels and scores differ in length");
      std::optional<std::vector<double>> proba;
      std::vector<std::uint8_t> pred;
      const auto& h = table.header;
      if (std::find(h.begin(), h.end(), "probability") != h.end()) {
        const auto c = table.column("probability");
        proba.emplace();
        for (const auto& row : table.rows) proba->push_back(prep::parse_number(row.at(c)));
        pred = metrics::threshold_predictions(*proba, eval_threshold);
      } else {
        const auto c = table.column("prediction");
        for (const auto& row : table.rows) pred.push_back(parse_label(row.at(c)));
      }
      const auto cm = metrics::confusion(labels, pred);
      auto r = metrics::report(cm);
      r.baseline_prc = metrics::baseline_prc(labels);
      const fs::path dir = out_dir(g);
      write_text(dir / "metrics.csv", metrics::report_csv_header() + "\n" + metrics::report_csv_row(cm, r) + "\n");
      write_text(dir / "metrics.txt", metrics::report_text(cm, r));
      if (proba && cm.positives() > 0) {
        const auto curve = metrics::pr_curve(labels, *proba);
        metrics::write_pr_curve_csv(dir / "pr_curve.csv", curve);
        out << "AUC-PR " << prep::format_number(curve.auc) << '\n';
      }
      out << metrics::report_text(cm, r);
    } else if (*tune) {
      require_file(tune_in.data, "data");
      require_file(tune_in.schema, "schema");
      const Dataset raw = prep::load_csv(tune_in.data, load_schema(tune_in.schema));
      const auto space = tuning::SearchSpace::named(space_name);
      tuning::SearchOptions o;
      o.n_trials = trials ? trials : (space_name == "rs" ? 25 : space.size());
      o.folds = folds;
      o.seed = g.seed;
      o.base = tune_flags.make(g);
      o.missing = tune_flags.policy();
      const auto result = tuning::random_search(raw, space, o);
      const auto best = tuning::fit_best(raw, result, o.missing);
      const fs::path dir = out_dir(g);
      tuning::write_trial_log(dir / "trials.csv", result);
      gbt::save_model(dir / "best_model.json", {best.model, best.transform});
      const auto& w = result.winner();
      out << result.trials.size() << " trials; winner trial " << w.index << " AUC-PR "
          << harness::mean_std(w.scores.auc_mean, w.scores.auc_std) << " F1 "
          << harness::mean_std(w.scores.f1_mean, w.scores.f1_std) << '\n';
    } else if (*sample) {
      require_file(sample_in.data, "data");
      require_file(sample_in.schema, "schema");
      const Dataset raw = prep::load_csv(sample_in.data, load_schema(sample_in.schema));
      sampling::SamplingPlan p;
      p.strategy = sampling::strategy_from_string(strategy);
      p.target_pos_fraction = target;
      p.seed = g.seed;
      const auto r = sampling::resample(raw, p);
      const fs::path dir = out_dir(g);
      prep::write_csv(dir / "sampled.csv", r.data);
      sampling::write_audit_csv(dir / "audit.csv", raw, r);
      out << "sampled " << raw.rows() << " rows into " << r.data.rows() << " (" << r.data.positives()
          << " positive)\n";
    } else if (*synth) {
      const Dataset d = harness::synth_generate(synth_spec);
      const fs::path dir = out_dir(g);
      prep::write_csv(dir / "synth.csv", d);
      save_schema(dir / "schema.json", d.schema());
      out << "generated " << d.rows() << " rows (" << d.positives() << " positive) in " << dir.string() << '\n';
    } else if (*experiment) {
      std::optional<Dataset> source;
      if (!exp_in.data.empty()) {
        if (exp_in.schema.empty()) throw Error("experiment --data needs --schema");
        require_file(exp_in.data, "data");
        require_file(exp_in.schema, "schema");
        source = prep::load_csv(exp_in.data, load_schema(exp_in.schema));
      }
      auto synthetic = [&](std::size_t rows, double pos) {
        harness::SynthSpec s = synth_spec;
        if (!experiment->count("--rows")) s.n_rows = rows;
        if (!experiment->count("--pos-fraction")) s.pos_fraction = pos;
        return harness::synth_generate(s);
      };
      const auto base = exp_flags.make(g);
      const auto policy = exp_flags.policy();
      harness::ExperimentResult result;
      if (kind == "grid") {
        harness::GridOptions o;
        o.sizes = sizes;
        o.distributions = distributions;
        o.approaches.clear();
        for (const auto& a : approaches) o.approaches.push_back(harness::approach_from_string(a));
        o.tuning = plan;
        o.base = base;
        o.missing = policy;
        o.seed = g.seed;
        const std::size_t biggest = *std::max_element(sizes.begin(), sizes.end());
        result.grid = harness::run_grid(source ? *source : synthetic(2 * biggest, 0.5), o);
      } else if (kind == "sampling") {
        harness::SamplingOptions o;
        o.distributions = distributions;
        o.size = sample_size;
        o.tuning = plan;
        o.base = base;
        o.missing = policy;
        o.seed = g.seed;
        result.sampling = harness::sampling_experiment(source ? *source : synthetic(2 * sample_size, 0.5), o);
      } else if (kind == "imbalance") {
        harness::ObjectiveOptions o;
        o.folds = plan.folds;
        o.base = base;
        o.missing = policy;
        o.seed = g.seed;
        result.objectives = harness::imbalance_objective_experiment(source ? *source : synthetic(768, 0.35), o);
      } else {
        drift_opts.folds = plan.folds;
        drift_opts.base = base;
        drift_opts.missing = policy;
        drift_opts.seed = g.seed;
        const Dataset stream =
            source ? *source
                   : synthetic(drift_opts.train_window + drift_opts.sections * drift_opts.test_window, 0.5);
        if (mode != "once") result.drift.push_back(harness::drift_experiment(stream, harness::DriftMode::moving_window, drift_opts));
        if (mode != "moving") result.drift.push_back(harness::drift_experiment(stream, harness::DriftMode::train_once, drift_opts));
      }
      const auto files = harness::emit_report(result, out_dir(g));
      out << harness::report_tables(result);
      out << "wrote " << files.size() << " files to " << fs::path(g.out).string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace imbboost::cli
