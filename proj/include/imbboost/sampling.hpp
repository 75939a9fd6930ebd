#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "imbboost/dataset.hpp"

namespace imbboost::sampling {

enum class Strategy { under, over, combined_preserve_size };

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view text);  // "under" | "over" | "combined"

struct SamplingPlan {
  Strategy strategy = Strategy::combined_preserve_size;
  double target_pos_fraction = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Resampled table plus, for each output row, the input row it copies.
// Output rows are ordered by origin so a time index stays sorted.
struct Resampled {
  Dataset data;
  std::vector<std::size_t> origin;
};

// Majority drawn without replacement down to the target; minority kept.
Resampled random_under_sample(const Dataset& train, const SamplingPlan& plan);
// Minority duplicated with replacement up to the target; majority kept.
Resampled random_over_sample(const Dataset& train, const SamplingPlan& plan);
// Same row count, round(n * target) positives: one class under-sampled, the
// other over-sampled with real-row copies.
Resampled balance_preserve_size(const Dataset& train, const SamplingPlan& plan);

Resampled resample(const Dataset& train, const SamplingPlan& plan);

// How many times each input row appears in the output.
std::vector<std::size_t> multiplicities(const Resampled& r, std::size_t input_rows);

// row_id,label,multiplicity for every input row.
void write_audit_csv(const std::filesystem::path& path, const Dataset& input, const Resampled& r);

}  // namespace imbboost::sampling
