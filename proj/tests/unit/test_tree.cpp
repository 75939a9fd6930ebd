#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbboost/booster.hpp"
#include "imbboost/error.hpp"
#include "imbboost/tree.hpp"
#include "oracles.hpp"

using namespace imbboost;
using namespace imbboost::gbt;

TEST_CASE("gain and leaf weight formulas") {
  SplitParams p{1.0, 0.0, 0.0};
  GradSum l{-2.0, 3.0}, r{4.0, 5.0};
  const double want = 0.5 * (4.0 / 4.0 + 16.0 / 6.0 - 4.0 / 9.0);
  CHECK(split_gain(l, r, p) == doctest::Approx(want).epsilon(1e-15));
  p.min_split_loss = 0.5;
  CHECK(split_gain(l, r, p) == doctest::Approx(want - 0.5).epsilon(1e-15));
  CHECK(leaf_weight({-2.0, 3.0}, 1.0) == 0.5);
  CHECK(leaf_weight({0.0, 0.0}, 1.0) == 0.0);
}

TEST_CASE("thresholds separate neighbours") {
  CHECK(split_threshold(1.0, 2.0) == 1.5);
  const double a = 1.0, b = std::nextafter(1.0, 2.0);
  const double t = split_threshold(a, b);
  CHECK(a < t);
  CHECK_FALSE(b < t);
}

TEST_CASE("tree structure") {
  Tree t;
  auto l = t.split(0, 2, 0.5, Direction::right);
  CHECK(l == 1);
  t.set_leaf_weight(1, -1.0);
  t.set_leaf_weight(2, 2.0);
  CHECK(t.leaves() == 2);
  CHECK(t.depth() == 1);
  CHECK(t.predict([](int) { return 0.1; }) == -1.0);
  CHECK(t.predict([](int) { return 0.5; }) == 2.0);
  CHECK(t.predict([](int) { return NAN; }) == 2.0);
  CHECK_THROWS_AS(t.split(0, 1, 0.0, Direction::left), Error);

  CHECK_NOTHROW(tree_from_nodes(t.nodes()));
  auto bad = t.nodes();
  bad[0].right = 1;
  CHECK_THROWS_AS(tree_from_nodes(bad), Error);
  auto inf = t.nodes();
  inf[1].weight = INFINITY;
  CHECK_THROWS_AS(tree_from_nodes(inf), Error);
}

TEST_CASE("single-feature split search") {
  std::vector<double> v{1, 2, 3, 4};
  std::vector<GradPair> g{{-1, 1}, {-1, 1}, {1, 1}, {1, 1}};
  auto best = best_split(v, g, {0.0, 0.0, 0.0});
  REQUIRE(best);
  CHECK(best->threshold == 2.5);
  CHECK(best->left.grad == -2);
  // no informative split
  std::vector<GradPair> flat{{1, 1}, {1, 1}, {1, 1}, {1, 1}};
  CHECK_FALSE(best_split(v, flat, {0.0, 0.0, 0.0}));
  // missing rows go where they help
  std::vector<double> m{1, 2, NAN, 4};
  std::vector<GradPair> mg{{-1, 1}, {1, 1}, {-1, 1}, {1, 1}};
  auto b2 = best_split(m, mg, {0.0, 0.0, 0.0});
  REQUIRE(b2);
  CHECK(b2->threshold == 1.5);
  CHECK(b2->default_direction == Direction::left);
}

TEST_CASE("stumps match exhaustive enumeration") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 5 + rng() % 120, k = 1 + rng() % 4;
    std::vector<std::vector<double>> cols(k, std::vector<double>(n));
    std::vector<std::uint8_t> y(n);
    for (auto& c : cols) {
      for (auto& v : c) v = rng() % 10 == 0 ? NAN : static_cast<double>(rng() % 12) * 0.75;
    }
    for (auto& l : y) l = rng() % 3 == 0;
    TrainConfig cfg;
    cfg.n_trees = 1;
    cfg.max_depth = 1;
    cfg.l2_lambda = static_cast<double>(rng() % 3);
    cfg.min_child_hessian = static_cast<double>(rng() % 3) * 0.5;
    auto model = fit(fixture::numeric_table(cols, y), cfg).model;
    std::vector<double> g(n), h(n, 0.25);
    for (std::size_t i = 0; i < n; ++i) g[i] = y[i] ? -0.5 : 0.5;
    auto want = oracle::stump(cols, g, h, cfg.l2_lambda, 0.0, cfg.min_child_hessian, cfg.learning_rate);
    const auto& nodes = model.trees().at(0).nodes();
    INFO("rep " << rep);
    if (!want.split) {
      REQUIRE(nodes.size() == 1);
      CHECK(nodes[0].weight == want.leaf);
      continue;
    }
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0].feature == want.feature);
    CHECK(nodes[0].threshold == want.threshold);
    CHECK((nodes[0].default_direction == Direction::left) == want.default_left);
    CHECK(nodes[1].weight == want.left_weight);
    CHECK(nodes[2].weight == want.right_weight);
  }
}
