#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbboost/error.hpp"
#include "imbboost/metrics.hpp"
#include "oracles.hpp"

using namespace imbboost;
using namespace imbboost::metrics;

namespace {

ConfusionMatrix cm_of(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
  return {tp, fp, tn, fn};
}

std::string two(const Score& s) { return format_score(s); }

}  // namespace

TEST_CASE("confusion counts") {
  std::vector<std::uint8_t> ones(4, 1);
  CHECK(confusion(ones, ones) == cm_of(4, 0, 0, 0));

  std::vector<std::uint8_t> y{1, 0}, p{0, 1};
  CHECK(confusion(y, p) == cm_of(0, 1, 0, 1));

  // 100 positives, 900 negatives; half of each error kind
  std::vector<std::uint8_t> labels, preds;
  for (int i = 0; i < 100; ++i) labels.push_back(1), preds.push_back(i < 50);
  for (int i = 0; i < 900; ++i) labels.push_back(0), preds.push_back(i < 50);
  CHECK(confusion(labels, preds) == cm_of(50, 50, 850, 50));

  CHECK_THROWS_WITH_AS(confusion(std::vector<std::uint8_t>{1}, std::vector<std::uint8_t>{1, 0}),
                       doctest::Contains("length mismatch"), Error);
  CHECK_THROWS_WITH_AS(confusion({}, {}), doctest::Contains("empty input"), Error);
}

TEST_CASE("golden table rows") {
  SUBCASE("balanced, symmetric errors") {
    auto r = report(cm_of(168, 166, 500, 166));
    CHECK(two(r.precision) == "0.50");
    CHECK(two(r.recall) == "0.50");
    CHECK(two(r.f1) == "0.50");
    CHECK(two(r.f_half) == "0.50");
    CHECK(two(r.f2) == "0.50");
    CHECK(two(r.accuracy) == "0.67");
  }
  SUBCASE("imbalanced, symmetric errors") {
    auto r = report(cm_of(50, 50, 850, 50));
    CHECK(two(r.f1) == "0.50");
    CHECK(two(r.accuracy) == "0.90");
    CHECK(*r.mcc == doctest::Approx(40000.0 / 90000.0).epsilon(1e-12));
  }
  SUBCASE("all negative") {
    auto r = report(cm_of(0, 0, 900, 100));
    CHECK_FALSE(r.precision);
    CHECK(two(r.recall) == "0.00");
    CHECK_FALSE(r.f1);
    CHECK_FALSE(r.f_half);
    CHECK_FALSE(r.f2);
    CHECK(two(r.accuracy) == "0.90");
    CHECK(two(r.precision) == "!");
  }
  SUBCASE("all positive") {
    auto r = report(cm_of(100, 900, 0, 0));
    CHECK(two(r.precision) == "0.10");
    CHECK(two(r.recall) == "1.00");
    CHECK(two(r.f1) == "0.18");
    CHECK(two(r.f_half) == "0.12");
    CHECK(two(r.f2) == "0.36");
    CHECK(two(r.accuracy) == "0.10");
    CHECK_FALSE(r.mcc);
  }
  SUBCASE("precise but low recall") {
    auto r = report(cm_of(5, 0, 900, 95));
    CHECK(two(r.precision) == "1.00");
    CHECK(two(r.recall) == "0.05");
    CHECK(two(r.f1) == "0.10");
    CHECK(two(r.f_half) == "0.21");
    CHECK(two(r.f2) == "0.06");
    CHECK(two(r.accuracy) == "0.91");
  }
}

TEST_CASE("f-beta orderings and scale invariance") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> d(0, 500);
  for (int i = 0; i < 2000; ++i) {
    auto cm = cm_of(d(rng) + 1, d(rng), d(rng), d(rng));
    auto r = report(cm);
    const double p = *r.precision, q = *r.recall;
    CHECK(*r.f1 == doctest::Approx(2 * p * q / (p + q)).epsilon(1e-12));
    if (p >= q) {
      CHECK(*r.f_half >= *r.f1 - 1e-12);
      CHECK(*r.f1 >= *r.f2 - 1e-12);
    } else {
      CHECK(*r.f_half <= *r.f1 + 1e-12);
      CHECK(*r.f1 <= *r.f2 + 1e-12);
    }
    const std::uint64_t k = 1 + i % 7;
    auto s = report(cm_of(cm.tp * k, cm.fp * k, cm.tn * k, cm.fn * k));
    CHECK(*s.f1 == doctest::Approx(*r.f1).epsilon(1e-12));
    CHECK(*s.accuracy == doctest::Approx(*r.accuracy).epsilon(1e-12));
    if (r.mcc) CHECK(*s.mcc == doctest::Approx(*r.mcc).epsilon(1e-9));
  }
}

TEST_CASE("all-negative predictor accuracy is the negative share") {
  for (std::uint64_t pos : {1, 10, 250}) {
    auto r = report(cm_of(0, 0, 1000 - pos, pos));
    CHECK(*r.accuracy == doctest::Approx((1000.0 - pos) / 1000.0));
    CHECK_FALSE(r.f1);
  }
}

TEST_CASE("baseline prc") {
  std::vector<std::uint8_t> half(1000, 0);
  std::fill(half.begin(), half.begin() + 500, 1);
  CHECK(baseline_prc(half) == 0.5);
  std::vector<std::uint8_t> tenth(1000, 0);
  std::fill(tenth.begin(), tenth.begin() + 100, 1);
  CHECK(baseline_prc(tenth) == doctest::Approx(0.1));
  CHECK(baseline_prc(std::vector<std::uint8_t>(5, 1)) == 1.0);
  CHECK_THROWS_AS(baseline_prc({}), Error);
}

TEST_CASE("pr curve") {
  SUBCASE("perfect ranking") {
    std::vector<std::uint8_t> y{1, 1, 0, 0, 0};
    std::vector<double> s{0.9, 0.8, 0.3, 0.2, 0.1};
    CHECK(auc_pr(y, s) == 1.0);
  }
  SUBCASE("constant scores") {
    std::vector<std::uint8_t> y{1, 0, 0, 0, 1, 0, 0, 0, 0, 0};
    std::vector<double> s(10, 0.4);
    auto c = pr_curve(y, s);
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0].recall == 1.0);
    CHECK(c.points[0].precision == doctest::Approx(0.2));
    CHECK(c.auc == doctest::Approx(0.2));
  }
  SUBCASE("matches the sweep oracle on tied random scores") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 20 + rep * 7;
      std::vector<std::uint8_t> y(n);
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = rng() % 4 == 0;
        s[i] = static_cast<double>(rng() % 9);
      }
      y[0] = 1;
      auto c = pr_curve(y, s);
      CHECK(c.auc == doctest::Approx(oracle::average_precision(y, s)).epsilon(1e-12));
      for (std::size_t k = 1; k < c.points.size(); ++k) {
        CHECK(c.points[k].recall >= c.points[k - 1].recall);
        CHECK(c.points[k].threshold < c.points[k - 1].threshold);
      }
      CHECK(c.auc >= 0.0);
      CHECK(c.auc <= 1.0);
    }
  }
  SUBCASE("monotone transforms keep the area") {
    std::mt19937_64 rng(3);
    std::vector<std::uint8_t> y(300);
    std::vector<double> s(300), t(300);
    for (int i = 0; i < 300; ++i) {
      y[i] = rng() % 3 == 0;
      s[i] = static_cast<double>(rng() % 1000) / 100.0 - 5.0;
      t[i] = std::exp(s[i]) * 3.0 + 1.0;
    }
    CHECK(auc_pr(y, s) == auc_pr(y, t));
  }
  CHECK_THROWS_WITH_AS(pr_curve(std::vector<std::uint8_t>{0, 0}, std::vector<double>{0.1, 0.2}),
                       doctest::Contains("no positive labels"), Error);
  CHECK_THROWS_WITH_AS(auc_pr(std::vector<std::uint8_t>{1}, std::vector<double>{NAN}), doctest::Contains("NaN"),
                       Error);
}

TEST_CASE("precision at n") {
  std::vector<std::uint8_t> y{1, 0, 1, 0};
  std::vector<double> s{0.9, 0.8, 0.7, 0.1};
  CHECK(precision_at_n(y, s, 2) == 0.5);
  CHECK(precision_at_n(y, s, 4) == 0.5);
  std::vector<std::uint8_t> z{0, 1, 1, 0};
  std::vector<double> perfect{0.1, 0.9, 0.8, 0.2};
  CHECK(precision_at_n(z, perfect, 2) == 1.0);
  // ties fall back to row order
  std::vector<double> tied{0.5, 0.5, 0.5, 0.5};
  CHECK(precision_at_n(z, tied, 1) == 0.0);
  CHECK(precision_at_n(z, tied, 2) == 0.5);
  CHECK_THROWS_AS(precision_at_n(y, s, 0), Error);
  CHECK_THROWS_AS(precision_at_n(y, s, 5), Error);
}

TEST_CASE("thresholds and f1_at") {
  std::vector<double> p{0.2, 0.5, 0.7};
  CHECK(threshold_predictions(p, 0.5) == std::vector<std::uint8_t>{0, 1, 1});
  std::vector<std::uint8_t> y{1, 1, 0};
  CHECK(f1_at(y, p, 0.5) == doctest::Approx(0.5));
  CHECK(f1_at(std::vector<std::uint8_t>{1, 0}, std::vector<double>{0.1, 0.1}) == 0.0);
}

TEST_CASE("text and csv renderings") {
  auto cm = cm_of(0, 0, 900, 100);
  auto r = report(cm);
  const auto header = report_csv_header();
  const auto row = report_csv_row(cm, r);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(row.rfind("0,0,900,100,,0,,,,0.9", 0) == 0);
  CHECK(report_text(cm, r).find("Accuracy") != std::string::npos);

  auto dir = fixture::fresh_dir("metrics");
  std::vector<std::uint8_t> y{1, 0, 1};
  std::vector<double> s{0.9, 0.4, 0.2};
  write_pr_curve_csv(dir / "pr.csv", pr_curve(y, s));
  CHECK(fixture::count_lines(dir / "pr.csv") == 4);
}
