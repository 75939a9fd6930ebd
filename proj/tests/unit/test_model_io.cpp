#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbboost/booster.hpp"
#include "imbboost/error.hpp"
#include "imbboost/model_io.hpp"
#include "imbboost/transform.hpp"

using namespace imbboost;
using namespace imbboost::gbt;

namespace {

Dataset table(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : cols) c[i] = u(rng) < 0.1 ? NAN : u(rng) / 3.0;
    y[i] = cols[0][i] + u(rng) * 0.3 > 0.3;
  }
  return fixture::numeric_table(cols, y);
}

}  // namespace

TEST_CASE("save and load give identical predictions") {
  auto d = table(800, 1);
  TrainConfig c;
  c.n_trees = 15;
  c.objective.weighted_alpha = 2.5;
  c.subsample = 0.9;
  auto m = fit(d, c).model;
  auto dir = fixture::fresh_dir("model_io");
  auto st = prep::fit_transform(d);
  save_model(dir / "m.json", {m, st});
  auto back = load_model(dir / "m.json");
  CHECK(back.model == m);
  REQUIRE(back.transform);
  CHECK(*back.transform == st);
  auto a = predict_margin(m, d), b = predict_margin(back.model, d);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]));
  save_model(dir / "m2.json", back);
  CHECK(fixture::read_text(dir / "m.json") == fixture::read_text(dir / "m2.json"));
}

TEST_CASE("document layout") {
  Tree t;
  t.split(0, 1, 0.25, Direction::right);
  t.set_leaf_weight(1, -0.5);
  t.set_leaf_weight(2, 0.125);
  auto j = tree_to_json(t);
  CHECK(j["feature"] == 1);
  CHECK(j["default"] == "right");
  CHECK(j["left"]["leaf"] == -0.5);
  CHECK(tree_from_json(j) == t);

  TrainConfig c;
  c.max_depth = 3;
  c.objective.focal_gamma = 2;
  CHECK(config_from_json(config_to_json(c)) == c);

  Ensemble e({t}, 0.0, {}, {"a", "b"});
  auto doc = model_to_json(e);
  CHECK(doc["format"] == "imbboost-model");
  CHECK(doc["version"] == kModelFormatVersion);
  CHECK(model_from_json(doc) == e);
}

TEST_CASE("malformed documents are rejected") {
  Tree t;
  t.split(0, 5, 0.25, Direction::left);
  Ensemble e({t}, 0.0, {}, {"a", "b"});
  auto doc = nlohmann::json::parse(model_to_json(e).dump());
  CHECK_THROWS_WITH_AS(model_from_json(doc), doctest::Contains("bad model"), Error);

  Ensemble ok({Tree::leaf(0.5)}, 0.0, {}, {"a"});
  auto good = nlohmann::json::parse(model_to_json(ok).dump());
  auto fp = good;
  fp["schema_fingerprint"] = "0000";
  CHECK_THROWS_WITH_AS(model_from_json(fp), doctest::Contains("bad model"), Error);
  auto ver = good;
  ver["version"] = 99;
  CHECK_THROWS_AS(model_from_json(ver), Error);

  auto dir = fixture::fresh_dir("model_bad");
  fixture::write_text(dir / "x.json", "{not json");
  CHECK_THROWS_AS(load_model(dir / "x.json"), Error);
  CHECK_THROWS_AS(load_model(dir / "absent.json"), Error);
}
