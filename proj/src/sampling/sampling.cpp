#include "imbboost/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "imbboost/error.hpp"
#include "imbboost/random.hpp"

namespace imbboost::sampling {

namespace {

struct Classes {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
};

Classes split_classes(const Dataset& train) {
  Classes c{rows_with_label(train, 1), rows_with_label(train, 0)};
  if (c.pos.empty() || c.neg.empty()) throw Error("single-class input: resampling needs both classes");
  return c;
}

// `count` rows from `pool`: without replacement when count <= |pool| (a
// subset), otherwise every row once plus count - |pool| uniform duplicates.
std::vector<std::size_t> draw(const std::vector<std::size_t>& pool, std::size_t count, Rng& rng) {
  if (count <= pool.size()) return sample_without_replacement(pool, count, rng);
  std::vector<std::size_t> out = pool;
  for (std::size_t i = pool.size(); i < count; ++i) out.push_back(pool[uniform_index(rng, pool.size())]);
  return out;
}

Resampled assemble(const Dataset& train, std::vector<std::size_t> origin) {
  std::sort(origin.begin(), origin.end());
  return {train.select(origin), std::move(origin)};
}

// Counts (pos, neg) for the plan's strategy.
std::pair<std::size_t, std::size_t> targets(const SamplingPlan& plan, std::size_t p, std::size_t n) {
  const double f = plan.target_pos_fraction;
  const double ratio = f / (1.0 - f);  // wanted pos / neg
  switch (plan.strategy) {
    case Strategy::under: {
      // Shrink whichever class is in excess of the target ratio.
      const auto want_neg = static_cast<std::size_t>(std::llround(static_cast<double>(p) / ratio));
      if (want_neg <= n) return {p, std::max<std::size_t>(want_neg, 1)};
      const auto want_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
      return {std::max<std::size_t>(want_pos, 1), n};
    }
    case Strategy::over: {
      const auto want_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
      if (want_pos >= p) return {want_pos, n};
      const auto want_neg = static_cast<std::size_t>(std::llround(static_cast<double>(p) / ratio));
      return {p, want_neg};
    }
    case Strategy::combined_preserve_size: {
      const std::size_t total = p + n;
      auto want_pos = static_cast<std::size_t>(std::llround(static_cast<double>(total) * f));
      want_pos = std::clamp<std::size_t>(want_pos, 1, total - 1);
      return {want_pos, total - want_pos};
    }
  }
  return {p, n};
}

Resampled run(const Dataset& train, const SamplingPlan& plan, Strategy strategy) {
  SamplingPlan p = plan;
  p.strategy = strategy;
  p.validate();
  const Classes c = split_classes(train);
  const auto [want_pos, want_neg] = targets(p, c.pos.size(), c.neg.size());
  Rng rng(derive_seed(p.seed, 0x5A3D));
  std::vector<std::size_t> origin = draw(c.pos, want_pos, rng);
  const std::vector<std::size_t> neg = draw(c.neg, want_neg, rng);
  origin.insert(origin.end(), neg.begin(), neg.end());
  return assemble(train, std::move(origin));
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::under: return "under";
    case Strategy::over: return "over";
    case Strategy::combined_preserve_size: return "combined";
  }
  return "combined";
}

Strategy strategy_from_string(std::string_view text) {
  if (text == "under") return Strategy::under;
  if (text == "over") return Strategy::over;
  if (text == "combined" || text == "combined_preserve_size") return Strategy::combined_preserve_size;
  throw Error("unknown sampling strategy: " + std::string(text));
}

void SamplingPlan::validate() const {
  if (!(target_pos_fraction > 0.0 && target_pos_fraction < 1.0)) {
    throw Error("invalid plan: target_pos_fraction must lie in (0, 1)");
  }
}

Resampled random_under_sample(const Dataset& train, const SamplingPlan& plan) {
  return run(train, plan, Strategy::under);
}

Resampled random_over_sample(const Dataset& train, const SamplingPlan& plan) {
  return run(train, plan, Strategy::over);
}

Resampled balance_preserve_size(const Dataset& train, const SamplingPlan& plan) {
  return run(train, plan, Strategy::combined_preserve_size);
}

Resampled resample(const Dataset& train, const SamplingPlan& plan) { return run(train, plan, plan.strategy); }

std::vector<std::size_t> multiplicities(const Resampled& r, std::size_t input_rows) {
  std::vector<std::size_t> m(input_rows, 0);
  for (std::size_t o : r.origin) ++m.at(o);
  return m;
}

void write_audit_csv(const std::filesystem::path& path, const Dataset& input, const Resampled& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const auto m = multiplicities(r, input.rows());
  const auto labels = input.labels();
  out << "row_id,label,multiplicity\n";
  for (std::size_t i = 0; i < m.size(); ++i) out << i << ',' << int(labels[i]) << ',' << m[i] << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace imbboost::sampling
