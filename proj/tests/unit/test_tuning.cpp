#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbboost/error.hpp"
#include "imbboost/pipeline.hpp"
#include "imbboost/tuning.hpp"

using namespace imbboost;
using namespace imbboost::tuning;

namespace {

Dataset raw_table(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  FeatureSchema s;
  s.columns = {{"a", ColumnKind::numeric}, {"b", ColumnKind::numeric}, {"c", ColumnKind::categorical}};
  s.label_column = "y";
  std::vector<double> a(n), b(n);
  std::vector<std::string> c(n);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng() % 4 == 0;
    a[i] = z(rng) * 10 + (y[i] ? 12 : 0);
    b[i] = rng() % 9 == 0 ? NAN : z(rng);
    c[i] = y[i] && rng() % 2 ? "hot" : (rng() % 2 ? "cold" : "");
  }
  return Dataset(s, {a, b, c}, y);
}

gbt::TrainConfig small_base() {
  gbt::TrainConfig c;
  c.n_trees = 10;
  return c;
}

}  // namespace

TEST_CASE("search spaces") {
  auto rs = SearchSpace::rs_grid();
  CHECK(rs.size() == 324);
  CHECK_NOTHROW(rs.validate());
  auto sc = SearchSpace::scale_grid();
  CHECK(sc.size() == 6);
  CHECK(sc.scale_pos_weight == std::vector<double>{1, 3, 19, 100, 1000, 1900});
  CHECK_THROWS_AS(SearchSpace::named("bayes"), Error);

  gbt::TrainConfig base;
  auto first = rs.at(0, base);
  CHECK(first.max_depth == 3);
  CHECK(first.learning_rate == 0.02);
  CHECK(first.n_trees == 100);
  auto second = rs.at(1, base);
  CHECK(second.n_trees == 1000);
  CHECK(second.max_depth == 3);
  auto last = rs.at(323, base);
  CHECK(last.max_depth == 20);
  CHECK(last.n_trees == 5000);
  CHECK(last.l2_lambda == base.l2_lambda);
  CHECK_THROWS_AS(rs.at(324, base), Error);

  std::set<std::string> seen;
  for (std::size_t p = 0; p < rs.size(); ++p) {
    auto c = rs.at(p, base);
    seen.insert(std::to_string(c.max_depth) + "/" + std::to_string(c.learning_rate) + "/" +
                std::to_string(c.subsample) + "/" + std::to_string(c.colsample_bytree) + "/" +
                std::to_string(c.n_trees));
  }
  CHECK(seen.size() == 324);
  CHECK_THROWS_AS(SearchSpace{}.validate(), Error);
}

TEST_CASE("folds partition the rows") {
  auto d = raw_table(503, 1);
  for (bool strat : {true, false}) {
    auto folds = kfold_split(d, 5, 9, strat);
    REQUIRE(folds.size() == 5);
    std::vector<int> hits(d.rows(), 0);
    for (const auto& f : folds) {
      CHECK(std::is_sorted(f.begin(), f.end()));
      CHECK(f.size() >= 100);
      CHECK(f.size() <= 101);
      for (auto r : f) hits[r]++;
      auto rest = complement(f, d.rows());
      CHECK(rest.size() + f.size() == d.rows());
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK(kfold_split(d, 5, 9, strat) == folds);
  }
  auto strat = kfold_split(d, 5, 3);
  const double share = static_cast<double>(d.positives()) / d.rows();
  for (const auto& f : strat) {
    std::size_t pos = 0;
    for (auto r : f) pos += d.labels()[r];
    CHECK(std::fabs(static_cast<double>(pos) - share * f.size()) <= 1.0);
  }
  CHECK_THROWS_AS(kfold_split(d, 1, 0), Error);
}

TEST_CASE("cross validation fits preprocessing inside each fold") {
  auto d = raw_table(400, 2);
  auto folds = kfold_split(d, 4, 1);
  auto cv = cross_validate(d, folds, small_base());
  REQUIRE(cv.folds.size() == 4);
  REQUIRE(cv.transforms.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    auto train_rows = complement(folds[k], d.rows());
    auto train = d.select(train_rows);
    const auto& col = train.numeric(0);
    CHECK(cv.transforms[k].scaler.ranges[0].min == *std::min_element(col.begin(), col.end()));
    CHECK(cv.transforms[k].scaler.ranges[0].max == *std::max_element(col.begin(), col.end()));
    CHECK(cv.folds[k].auc_pr > 0.5);
  }
  const auto f1s = cv.f1s();
  CHECK(f1s.size() == 4);
  CHECK(cv.f1_mean == doctest::Approx(std::accumulate(f1s.begin(), f1s.end(), 0.0) / 4));
}

TEST_CASE("random and grid search") {
  auto d = raw_table(300, 3);
  SearchSpace space;
  space.max_depth = {2, 4};
  space.learning_rate = {0.1, 0.3};
  SearchOptions opt;
  opt.n_trials = 4;
  opt.folds = 3;
  opt.seed = 5;
  opt.base = small_base();
  auto rs = random_search(d, space, opt);
  auto gs = grid_search(d, space, opt);
  REQUIRE(rs.trials.size() == 4);
  std::set<std::size_t> points;
  for (const auto& t : rs.trials) points.insert(t.point);
  CHECK(points.size() == 4);
  CHECK(rs.winner().point == gs.winner().point);
  CHECK(rs.winner().scores.auc_mean == gs.winner().scores.auc_mean);

  opt.n_trials = 2;
  auto again = random_search(d, space, opt);
  CHECK(again.trials[0].point == random_search(d, space, opt).trials[0].point);
  opt.n_trials = 5;
  CHECK_THROWS_AS(random_search(d, space, opt), Error);

  auto csv = trial_log_csv(gs);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("auc_pr_fold2") != std::string::npos);

  auto best = fit_best(d, gs);
  CHECK(best.model.config()->max_depth == gs.winner().config.max_depth);
  CHECK(best.predict_proba(d).size() == d.rows());

  CVResult empty;
  CHECK_THROWS_WITH_AS(empty.winner(), doctest::Contains("no winner"), Error);
}

TEST_CASE("ties keep the earliest trial") {
  CVResult r;
  r.trials.resize(3);
  for (std::size_t i = 0; i < 3; ++i) r.trials[i].index = i;
  r.trials[0].scores.auc_mean = 0.5;
  r.trials[1].scores.auc_mean = 0.7;
  r.trials[2].scores.auc_mean = 0.7;
  CHECK(r.winner().index == 1);
}

TEST_CASE("pipeline") {
  auto d = raw_table(300, 4);
  auto p = fit_pipeline(d, small_base());
  auto probs = p.predict_proba(d);
  CHECK(probs.size() == 300);
  CHECK(p.prepare(d).schema() == p.transform.prepared_schema());
}
