#pragma once

#include <cstdint>
#include <optional>

#include "imbboost/dataset.hpp"

namespace imbboost::harness {

struct DriftSpec {
  std::size_t onset = 0;  // first shifted row
  double magnitude = 0.0;
};

// Two Gaussian classes: numeric features are N(0, 1) with the positive
// class shifted by class_separation along a random unit direction.
// Categorical tokens are uniform for negatives and skewed for positives by
// an amount that vanishes at separation 0.
struct SynthSpec {
  std::size_t n_rows = 10000;
  std::size_t n_numeric = 8;
  std::size_t n_categorical = 2;
  std::size_t n_tokens = 6;
  double pos_fraction = 0.5;
  double class_separation = 2.0;
  double missing_rate = 0.0;
  std::optional<DriftSpec> drift;
  std::uint64_t seed = 0;

  void validate() const;
};

// Exactly round(n_rows * pos_fraction) positives at random positions,
// columns num0.. then cat0.., label "label", time "t" = row number. From
// the drift onset each numeric feature moves by magnitude times a random
// sign.
Dataset synth_generate(const SynthSpec& spec);

}  // namespace imbboost::harness
