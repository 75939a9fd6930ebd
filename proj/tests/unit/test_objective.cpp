#include <bit>
#include <cmath>

#include "doctest.h"
#include "imbboost/error.hpp"
#include "imbboost/objective.hpp"
#include "oracles.hpp"

using namespace imbboost;
using namespace imbboost::gbt;

namespace {

oracle::LossSpec spec_of(const ObjectiveParams& p) {
  oracle::LossSpec s;
  s.w = p.scale_pos_weight;
  if (p.weighted_alpha) s.alpha = *p.weighted_alpha;
  if (p.focal_gamma) s.gamma = *p.focal_gamma;
  return s;
}

bool close(double got, long double want, double rel) {
  return std::fabs(static_cast<long double>(got) - want) <= rel * std::fabs(want);
}

void check_against_differences(const ObjectiveParams& p) {
  const auto s = spec_of(p);
  for (int y = 0; y <= 1; ++y) {
    for (double m = -6.0; m <= 6.0; m += 0.25) {
      const auto d = loss_derivatives(p, static_cast<std::uint8_t>(y), m);
      const long double g = oracle::d1(s, y, m), h = oracle::d2(s, y, m);
      INFO(p.tag() << " y=" << y << " m=" << m << " grad " << d.grad << " vs " << static_cast<double>(g)
                   << " hess " << d.hess << " vs " << static_cast<double>(h));
      CHECK(close(loss(p, static_cast<std::uint8_t>(y), m), oracle::loss(s, y, m), 1e-12));
      CHECK(close(d.grad, g, 1e-6));
      CHECK(close(d.hess, h, 1e-6));
    }
  }
}

}  // namespace

TEST_CASE("parameter validation") {
  ObjectiveParams p;
  CHECK_NOTHROW(p.validate());
  p.scale_pos_weight = 0.5;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("invalid parameter"), Error);
  ObjectiveParams both;
  both.weighted_alpha = 2;
  both.focal_gamma = 1;
  CHECK_THROWS_WITH_AS(both.validate(), doctest::Contains("mutually exclusive"), Error);
  ObjectiveParams neg;
  neg.focal_gamma = -1;
  CHECK_THROWS_AS(neg.validate(), Error);
  ObjectiveParams small;
  small.weighted_alpha = 0.5;
  CHECK_THROWS_AS(small.validate(), Error);
}

TEST_CASE("logistic closed form") {
  ObjectiveParams p;
  for (double m : {-3.0, 0.0, 2.5}) {
    const double q = 1.0 / (1.0 + std::exp(-m));
    auto d1 = loss_derivatives(p, 1, m);
    auto d0 = loss_derivatives(p, 0, m);
    CHECK(d1.grad == doctest::Approx(q - 1));
    CHECK(d0.grad == doctest::Approx(q));
    CHECK(d1.hess == doctest::Approx(q * (1 - q)));
  }
  CHECK(loss_derivatives(p, 1, 0.0).grad == -0.5);
  CHECK(loss_derivatives(p, 0, 0.0).hess == 0.25);
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) <= 1.0);
}

TEST_CASE("derivatives match finite differences") {
  SUBCASE("scale weights") {
    for (double w : {1.0, 3.0, 19.0, 100.0}) check_against_differences({w, std::nullopt, std::nullopt});
  }
  SUBCASE("weighted alpha") {
    for (double a : {1.0, 2.0, 3.0, 4.0}) check_against_differences({1.0, a, std::nullopt});
  }
  SUBCASE("focal gamma") {
    for (double g : {0.0, 1.0, 2.0, 3.0}) check_against_differences({1.0, std::nullopt, g});
    check_against_differences({5.0, std::nullopt, 2.0});
  }
}

TEST_CASE("neutral parameters reduce to plain logistic bit for bit") {
  const ObjectiveParams plain;
  const ObjectiveParams a1{1.0, 1.0, std::nullopt};
  const ObjectiveParams g0{1.0, std::nullopt, 0.0};
  for (int y = 0; y <= 1; ++y) {
    for (double m = -6.0; m <= 6.0; m += 0.01) {
      const auto u = static_cast<std::uint8_t>(y);
      const auto base = loss_derivatives(plain, u, m);
      for (const auto& p : {a1, g0}) {
        const auto d = loss_derivatives(p, u, m);
        CHECK(std::bit_cast<std::uint64_t>(d.grad) == std::bit_cast<std::uint64_t>(base.grad));
        CHECK(std::bit_cast<std::uint64_t>(d.hess) == std::bit_cast<std::uint64_t>(base.hess));
        CHECK(std::bit_cast<std::uint64_t>(loss(p, u, m)) == std::bit_cast<std::uint64_t>(loss(plain, u, m)));
      }
    }
  }
}

TEST_CASE("boosting derivatives clamp the hessian") {
  ObjectiveParams focal{1.0, std::nullopt, 3.0};
  std::vector<std::uint8_t> y{1, 0, 1};
  std::vector<double> m{-30.0, 0.0, 30.0};
  auto gp = grad_hess(focal, y, m);
  REQUIRE(gp.size() == 3);
  for (const auto& g : gp) CHECK(g.hess >= kHessianFloor);
  CHECK_THROWS_AS(grad_hess(focal, y, std::vector<double>{0.0}), Error);
  CHECK(total_loss(ObjectiveParams{}, std::vector<std::uint8_t>{1, 0}, std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(2 * std::log(2.0)));
}
