#include "imbboost/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbboost/error.hpp"

namespace imbboost::stats {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive(F& f, double a, double fa, double b, double fb, double m, double fm, double whole, double tol,
                int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 50);
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error("empty input: mean of no values");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw Error("insufficient rows: variance needs two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double t_density(double t, double df) {
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * M_PI);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(t * t / df));
}

double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw Error("invalid degrees of freedom");
  if (std::isnan(t)) throw Error("invalid t statistic");
  const double a = std::abs(t);
  if (std::isinf(a)) return 0.0;
  // Upper tail on [a, inf) mapped to s in [0, 1) via x = a + s / (1 - s).
  auto g = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double u = 1.0 - s;
    return t_density(a + s / u, df) / (u * u);
  };
  const double tail = integrate(g, 0.0, 1.0, 1e-14);
  return std::min(1.0, 2.0 * tail);
}

TTest ttest_unpaired(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error("insufficient rows: t-test needs two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2.0;
  const double pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / df;
  if (!(pooled > 0.0)) throw Error("zero pooled variance");
  TTest r;
  r.df = df;
  r.t = (mean(a) - mean(b)) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  r.p = t_two_tailed_p(r.t, df);
  return r;
}

}  // namespace imbboost::stats
