#pragma once

#include <span>

namespace imbboost::stats {

double mean(std::span<const double> xs);
// Population standard deviation (divides by n).
double population_std(std::span<const double> xs);
// Unbiased variance (divides by n - 1).
double sample_variance(std::span<const double> xs);

// Student t density and two-tailed tail probability P(|T| >= |t|), the
// latter by adaptive Simpson integration of the density.
double t_density(double t, double df);
double t_two_tailed_p(double t, double df);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Unpaired two-sample t-test with pooled variance. Throws Error when either
// sample has fewer than two values or the pooled variance is zero.
TTest ttest_unpaired(std::span<const double> a, std::span<const double> b);

}  // namespace imbboost::stats
