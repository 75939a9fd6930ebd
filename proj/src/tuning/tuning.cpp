#include "imbboost/tuning.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imbboost/csv.hpp"
#include "imbboost/error.hpp"
#include "imbboost/metrics.hpp"
#include "imbboost/random.hpp"
#include "imbboost/stats.hpp"

namespace imbboost::tuning {

namespace {

template <typename T>
std::size_t radix(const std::vector<T>& v) {
  return v.empty() ? 1 : v.size();
}

template <typename T>
void pick(const std::vector<T>& values, std::size_t& point, std::size_t& stride, T& out) {
  if (values.empty()) return;
  stride /= values.size();
  out = values[point / stride];
  point %= stride;
}

template <typename T>
void pick_optional(const std::vector<T>& values, std::size_t& point, std::size_t& stride, std::optional<T>& out) {
  if (values.empty()) return;
  T v{};
  pick(values, point, stride, v);
  out = v;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? prep::format_number(*v) : ""; }

}  // namespace

std::size_t SearchSpace::size() const {
  return radix(max_depth) * radix(learning_rate) * radix(subsample) * radix(colsample_bytree) * radix(n_trees) *
         radix(scale_pos_weight) * radix(weighted_alpha) * radix(focal_gamma);
}

gbt::TrainConfig SearchSpace::at(std::size_t point, const gbt::TrainConfig& base) const {
  if (point >= size()) throw Error("search space point out of range");
  gbt::TrainConfig c = base;
  std::size_t stride = size();
  pick(max_depth, point, stride, c.max_depth);
  pick(learning_rate, point, stride, c.learning_rate);
  pick(subsample, point, stride, c.subsample);
  pick(colsample_bytree, point, stride, c.colsample_bytree);
  pick(n_trees, point, stride, c.n_trees);
  pick(scale_pos_weight, point, stride, c.objective.scale_pos_weight);
  pick_optional(weighted_alpha, point, stride, c.objective.weighted_alpha);
  pick_optional(focal_gamma, point, stride, c.objective.focal_gamma);
  return c;
}

void SearchSpace::validate() const {
  if (max_depth.empty() && learning_rate.empty() && subsample.empty() && colsample_bytree.empty() &&
      n_trees.empty() && scale_pos_weight.empty() && weighted_alpha.empty() && focal_gamma.empty()) {
    throw Error("invalid search space: no parameter lists");
  }
  if (!weighted_alpha.empty() && !focal_gamma.empty()) {
    throw Error("invalid search space: weighted_alpha and focal_gamma are exclusive");
  }
  const gbt::TrainConfig base;
  for (std::size_t i = 0; i < size(); ++i) at(i, base).validate();
}

SearchSpace SearchSpace::rs_grid() {
  SearchSpace s;
  s.max_depth = {3, 6, 12, 20};
  s.learning_rate = {0.02, 0.1, 0.2};
  s.subsample = {0.4, 0.8, 1.0};
  s.colsample_bytree = {0.4, 0.6, 1.0};
  s.n_trees = {100, 1000, 5000};
  return s;
}

SearchSpace SearchSpace::scale_grid() {
  SearchSpace s;
  s.scale_pos_weight = {1, 75 / 25, 95 / 5, 100, 1000, 95 * 100 / 5};
  return s;
}

SearchSpace SearchSpace::named(const std::string& name) {
  if (name == "rs") return rs_grid();
  if (name == "scale") return scale_grid();
  throw Error("unknown search space: " + name);
}

std::vector<Fold> kfold_split(const Dataset& data, std::size_t k, std::uint64_t seed, bool stratified) {
  if (k < 2) throw Error("invalid fold count: k must be at least 2");
  if (k > data.rows()) throw Error("k too large for data");
  Rng rng(derive_seed(seed, 0xF01D));
  std::vector<std::size_t> order;
  if (stratified) {
    auto pos = rows_with_label(data, 1);
    auto neg = rows_with_label(data, 0);
    if (pos.size() < k || neg.size() < k) throw Error("k too large for data: a class has fewer rows than folds");
    shuffle(pos, rng);
    shuffle(neg, rng);
    order = std::move(pos);
    order.insert(order.end(), neg.begin(), neg.end());
  } else {
    order.resize(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < order.size(); ++i) folds[i % k].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Fold complement(const Fold& fold, std::size_t rows) {
  std::vector<bool> held(rows, false);
  for (auto r : fold) held.at(r) = true;
  Fold out;
  out.reserve(rows - fold.size());
  for (std::size_t i = 0; i < rows; ++i) {
    if (!held[i]) out.push_back(i);
  }
  return out;
}

std::vector<double> CVScores::f1s() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.f1);
  return out;
}

std::vector<double> CVScores::aucs() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.auc_pr);
  return out;
}

CVScores cross_validate(const Dataset& raw, const std::vector<Fold>& folds, const gbt::TrainConfig& config,
                        const prep::MissingPolicy& missing) {
  if (folds.size() < 2) throw Error("invalid fold count: k must be at least 2");
  CVScores out;
  for (const Fold& held : folds) {
    const Dataset train = raw.select(complement(held, raw.rows()));
    const Dataset valid = raw.select(held);
    FittedPipeline p = fit_pipeline(train, config, missing);
    const auto proba = p.predict_proba(valid);
    FoldScore s;
    s.auc_pr = valid.positives() > 0 ? metrics::auc_pr(valid.labels(), proba) : 0.0;
    s.f1 = metrics::f1_at(valid.labels(), proba, 0.5);
    out.folds.push_back(s);
    out.transforms.push_back(std::move(p.transform));
  }
  const auto a = out.aucs();
  const auto f = out.f1s();
  out.auc_mean = stats::mean(a);
  out.auc_std = stats::population_std(a);
  out.f1_mean = stats::mean(f);
  out.f1_std = stats::population_std(f);
  return out;
}

const Trial& CVResult::winner() const {
  if (trials.empty()) throw Error("no winner: empty trial log");
  const Trial* best = &trials.front();
  for (const Trial& t : trials) {
    if (t.scores.auc_mean > best->scores.auc_mean) best = &t;
  }
  return *best;
}

namespace {

CVResult evaluate_points(const Dataset& raw, const SearchSpace& space, const std::vector<std::size_t>& points,
                         const SearchOptions& options) {
  const auto folds = kfold_split(raw, options.folds, options.seed, options.stratified);
  CVResult result;
  result.folds = folds.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    Trial t;
    t.index = i;
    t.point = points[i];
    t.config = space.at(points[i], options.base);
    t.scores = cross_validate(raw, folds, t.config, options.missing);
    result.trials.push_back(std::move(t));
  }
  return result;
}

}  // namespace

CVResult random_search(const Dataset& raw, const SearchSpace& space, const SearchOptions& options) {
  space.validate();
  if (options.n_trials < 1) throw Error("invalid trial count: n_trials must be at least 1");
  if (options.n_trials > space.size()) {
    throw Error("n_trials exceeds the search space size (" + std::to_string(space.size()) + ")");
  }
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(derive_seed(options.seed, 0x7A1));
  return evaluate_points(raw, space, sample_without_replacement(std::move(all), options.n_trials, rng), options);
}

CVResult grid_search(const Dataset& raw, const SearchSpace& space, const SearchOptions& options) {
  space.validate();
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate_points(raw, space, all, options);
}

FittedPipeline fit_best(const Dataset& raw, const CVResult& result, const prep::MissingPolicy& missing) {
  return fit_pipeline(raw, result.winner().config, missing);
}

std::string trial_log_csv(const CVResult& result) {
  std::ostringstream out;
  out << "trial,point,max_depth,learning_rate,subsample,colsample_bytree,n_trees,scale_pos_weight,"
         "weighted_alpha,focal_gamma";
  for (std::size_t k = 0; k < result.folds; ++k) out << ",auc_pr_fold" << k;
  for (std::size_t k = 0; k < result.folds; ++k) out << ",f1_fold" << k;
  out << ",auc_pr_mean,auc_pr_std,f1_mean,f1_std,winner\n";
  const std::size_t win = result.trials.empty() ? 0 : result.winner().index;
  for (const Trial& t : result.trials) {
    const auto& c = t.config;
    out << t.index << ',' << t.point << ',' << c.max_depth << ',' << prep::format_number(c.learning_rate) << ','
        << prep::format_number(c.subsample) << ',' << prep::format_number(c.colsample_bytree) << ','
        << c.n_trees << ',' << prep::format_number(c.objective.scale_pos_weight) << ','
        << fmt_opt(c.objective.weighted_alpha) << ',' << fmt_opt(c.objective.focal_gamma);
    for (const auto& f : t.scores.folds) out << ',' << prep::format_number(f.auc_pr);
    for (const auto& f : t.scores.folds) out << ',' << prep::format_number(f.f1);
    out << ',' << prep::format_number(t.scores.auc_mean) << ',' << prep::format_number(t.scores.auc_std) << ','
        << prep::format_number(t.scores.f1_mean) << ',' << prep::format_number(t.scores.f1_std) << ','
        << (t.index == win ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_trial_log(const std::filesystem::path& path, const CVResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << trial_log_csv(result);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace imbboost::tuning
