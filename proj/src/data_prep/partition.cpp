#include "imbboost/partition.hpp"

#include <algorithm>
#include <cmath>

#include "imbboost/error.hpp"
#include "imbboost/random.hpp"

namespace imbboost::prep {

TimeSplit time_split(const Dataset& data, std::int64_t split_point) {
  const auto time = data.time_index();
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t i = 0; i < time.size(); ++i) {
    (time[i] < split_point ? train_rows : test_rows).push_back(i);
  }
  if (train_rows.empty()) throw Error("empty train: no rows before time " + std::to_string(split_point));
  if (test_rows.empty()) throw Error("empty test: no rows at or after time " + std::to_string(split_point));
  return {data.select(train_rows), data.select(test_rows)};
}

TimeSplit time_split_fraction(const Dataset& data, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train fraction must lie in (0, 1)");
  const auto time = data.time_index();
  if (time.empty()) throw Error("empty dataset");
  const auto cut = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(time.size())));
  if (cut >= time.size()) throw Error("empty test: split fraction leaves no test rows");
  return time_split(data, time[cut]);
}

Dataset stratified_subset(const Dataset& data, std::size_t size, double pos_fraction, std::uint64_t seed) {
  if (!(pos_fraction >= 0.0 && pos_fraction <= 1.0)) throw Error("pos_fraction must lie in [0, 1]");
  const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(size) * pos_fraction));
  const std::size_t n_neg = size - n_pos;
  auto pos = rows_with_label(data, 1);
  auto neg = rows_with_label(data, 0);
  if (pos.size() < n_pos) {
    throw Error("insufficient rows: need " + std::to_string(n_pos) + " positives, have " + std::to_string(pos.size()));
  }
  if (neg.size() < n_neg) {
    throw Error("insufficient rows: need " + std::to_string(n_neg) + " negatives, have " + std::to_string(neg.size()));
  }
  Rng rng(seed);
  auto chosen = sample_without_replacement(std::move(pos), n_pos, rng);
  auto chosen_neg = sample_without_replacement(std::move(neg), n_neg, rng);
  chosen.insert(chosen.end(), chosen_neg.begin(), chosen_neg.end());
  std::sort(chosen.begin(), chosen.end());
  return data.select(chosen);
}

}  // namespace imbboost::prep
