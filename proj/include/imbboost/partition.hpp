#pragma once

#include <cstdint>
#include <utility>

#include "imbboost/dataset.hpp"

namespace imbboost::prep {

struct TimeSplit {
  Dataset train;
  Dataset test;
};

// train = rows with time < split_point, test = the rest; order preserved.
TimeSplit time_split(const Dataset& data, std::int64_t split_point);

// Splits at the time value of the row at position floor(fraction * rows),
// so 80% of 10 000 distinct-time rows gives 8 000 / 2 000.
TimeSplit time_split_fraction(const Dataset& data, double train_fraction);

// Exactly `size` rows with round(size * pos_fraction) positives, drawn
// uniformly without replacement per class; original row order kept.
Dataset stratified_subset(const Dataset& data, std::size_t size, double pos_fraction, std::uint64_t seed);

}  // namespace imbboost::prep
