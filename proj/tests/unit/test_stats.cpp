#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "doctest.h"
#include "imbboost/error.hpp"
#include "imbboost/stats.hpp"

using namespace imbboost;
using namespace imbboost::stats;

TEST_CASE("moments") {
  std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean(xs) == 5);
  CHECK(population_std(xs) == 2);
  CHECK(sample_variance(xs) == doctest::Approx(32.0 / 7.0));
}

TEST_CASE("t tail probabilities") {
  // df = 4 has a closed form: P(|T| >= t) = 1 - t (6 + t^2) / (4 + t^2)^(3/2)
  for (double t : {0.0, 0.5, 1.0, 2.776, 5.0, 20.0}) {
    const double want = 1.0 - t * (6.0 + t * t) / std::pow(4.0 + t * t, 1.5);
    CHECK(t_two_tailed_p(t, 4) == doctest::Approx(want).epsilon(1e-9));
  }
  for (double df : {1.0, 2.0, 3.5, 8.0, 30.0}) {
    boost::math::students_t dist(df);
    for (double t : {0.1, 1.0, 2.0, 4.0, 10.0}) {
      const double want = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
      INFO("df " << df << " t " << t);
      CHECK(t_two_tailed_p(t, df) == doctest::Approx(want).epsilon(1e-8));
      CHECK(t_two_tailed_p(-t, df) == t_two_tailed_p(t, df));
      CHECK(t_density(t, df) == doctest::Approx(boost::math::pdf(dist, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("unpaired t-test") {
  std::vector<double> a{0.42, 0.45, 0.41, 0.44, 0.43}, b(5, 0.05);
  auto r = ttest_unpaired(a, b);
  CHECK(r.df == 8);
  const double sp = std::sqrt(sample_variance(a) * 4 / 8);
  CHECK(r.t == doctest::Approx((mean(a) - 0.05) / (sp * std::sqrt(0.4))));
  CHECK(r.p < 1e-6);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> x(12), y(9);
  for (auto& v : x) v = z(rng);
  for (auto& v : y) v = z(rng) + 0.4;
  auto s = ttest_unpaired(x, y);
  boost::math::students_t dist(19);
  CHECK(s.p == doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, std::fabs(s.t)))).epsilon(1e-8));

  auto same = ttest_unpaired(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == doctest::Approx(1.0).epsilon(1e-12));
  // the printed t with four degrees of freedom
  CHECK(t_two_tailed_p(3.2423, 4) == doctest::Approx(1.0 - 3.2423 * (6.0 + 3.2423 * 3.2423) /
                                                           std::pow(4.0 + 3.2423 * 3.2423, 1.5)).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(ttest_unpaired(b, b), doctest::Contains("zero pooled variance"), Error);
  CHECK_THROWS_WITH_AS(ttest_unpaired(std::vector<double>{1.0}, a), doctest::Contains("insufficient rows"), Error);
}
