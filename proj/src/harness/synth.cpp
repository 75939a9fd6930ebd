#include "imbboost/synth.hpp"

#include <cmath>

#include "imbboost/error.hpp"
#include "imbboost/random.hpp"

namespace imbboost::harness {

void SynthSpec::validate() const {
  if (n_numeric + n_categorical < 1) throw Error("invalid synth spec: no feature columns");
  if (n_rows < 2) throw Error("invalid synth spec: need at least two rows");
  if (n_categorical > 0 && n_tokens < 1) throw Error("invalid synth spec: categorical columns need tokens");
  if (!(pos_fraction >= 0.0 && pos_fraction <= 1.0)) throw Error("invalid synth spec: pos_fraction outside [0, 1]");
  if (!(missing_rate >= 0.0 && missing_rate <= 1.0)) throw Error("invalid synth spec: missing_rate outside [0, 1]");
  if (!(class_separation >= 0.0)) throw Error("invalid synth spec: negative class_separation");
}

Dataset synth_generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_rows;

  FeatureSchema schema;
  for (std::size_t j = 0; j < spec.n_numeric; ++j) schema.columns.push_back({"num" + std::to_string(j), ColumnKind::numeric});
  for (std::size_t j = 0; j < spec.n_categorical; ++j) {
    schema.columns.push_back({"cat" + std::to_string(j), ColumnKind::categorical});
  }
  schema.label_column = "label";
  schema.time_column = "t";

  // Labels: exact positive count, positions uniformly random.
  Rng label_rng(derive_seed(spec.seed, 1));
  const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.pos_fraction));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::uint8_t> labels(n, 0);
  for (auto r : sample_without_replacement(std::move(all), n_pos, label_rng)) labels[r] = 1;

  // Class direction and drift signs.
  Rng shape_rng(derive_seed(spec.seed, 2));
  std::vector<double> direction(spec.n_numeric);
  double norm = 0.0;
  for (auto& d : direction) {
    d = standard_normal(shape_rng);
    norm += d * d;
  }
  norm = std::sqrt(norm);
  for (auto& d : direction) d = norm > 0.0 ? d / norm : 0.0;
  std::vector<double> drift_sign(spec.n_numeric);
  for (auto& s : drift_sign) s = (shape_rng() & 1) ? 1.0 : -1.0;

  std::vector<ColumnData> columns;
  for (std::size_t j = 0; j < spec.n_numeric; ++j) {
    Rng rng(derive_seed(spec.seed, 3, j));
    NumericColumn col(n);
    for (std::size_t i = 0; i < n; ++i) {
      double x = standard_normal(rng) + (labels[i] ? spec.class_separation * direction[j] : 0.0);
      if (spec.drift && i >= spec.drift->onset) x += spec.drift->magnitude * drift_sign[j];
      col[i] = uniform01(rng) < spec.missing_rate ? std::nan("") : x;
    }
    columns.emplace_back(std::move(col));
  }

  for (std::size_t j = 0; j < spec.n_categorical; ++j) {
    Rng rng(derive_seed(spec.seed, 4, j));
    // Positive token weights exp(0.5 * separation * z_k); uniform at 0.
    std::vector<double> pos_cdf(spec.n_tokens);
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.n_tokens; ++k) {
      acc += std::exp(0.5 * spec.class_separation * standard_normal(rng));
      pos_cdf[k] = acc;
    }
    for (auto& c : pos_cdf) c /= acc;
    TokenColumn col(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = 0;
      if (labels[i]) {
        const double u = uniform01(rng);
        while (k + 1 < spec.n_tokens && u >= pos_cdf[k]) ++k;
      } else {
        k = uniform_index(rng, spec.n_tokens);
      }
      const bool missing = uniform01(rng) < spec.missing_rate;
      col[i] = missing ? std::string() : "c" + std::to_string(j) + "_" + std::to_string(k);
    }
    columns.emplace_back(std::move(col));
  }

  std::vector<std::int64_t> time(n);
  std::iota(time.begin(), time.end(), std::int64_t{0});
  return Dataset(std::move(schema), std::move(columns), std::move(labels), std::move(time));
}

}  // namespace imbboost::harness
