#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "imbboost/dataset.hpp"

namespace imbboost::prep {

inline constexpr int kTransformFormatVersion = 1;

struct ColumnRange {
  std::string column;
  double min = 0.0;
  double max = 0.0;
  // min == max, or the column was entirely missing in training.
  bool degenerate = false;

  bool operator==(const ColumnRange&) const = default;
};

// Min/max per numeric column, in schema order.
struct ScalerState {
  std::vector<ColumnRange> ranges;

  bool operator==(const ScalerState&) const = default;
};

struct CategoryCodes {
  std::string column;
  // Distinct training tokens, sorted; a token's code is its index.
  std::vector<std::string> tokens;

  std::int64_t code_of(std::string_view token) const;  // reserved code when unseen

  bool operator==(const CategoryCodes&) const = default;
};

struct EncoderState {
  static constexpr std::int64_t kReservedCode = -1;
  std::vector<CategoryCodes> columns;

  bool operator==(const EncoderState&) const = default;
};

ScalerState fit_scaler(const Dataset& train);
// x -> (x - min) / (max - min), clipped to [0, 1]; degenerate columns map to
// 0; missing stays missing.
Dataset apply_scaler(const ScalerState& state, const Dataset& data);

EncoderState fit_encoder(const Dataset& train);
// Known token -> code, unseen or missing token -> -1. Encoded columns switch
// to numeric storage.
Dataset apply_encoder(const EncoderState& state, const Dataset& data);

// Missing numeric cells -> fill. Other cells untouched.
Dataset replace_missing(const Dataset& data, double fill = 1.0);

enum class MissingMode {
  fill,               // replace missing by a constant after scaling
  default_direction,  // leave NaN; the trees route it
};

struct MissingPolicy {
  MissingMode mode = MissingMode::fill;
  double fill_value = 1.0;

  bool operator==(const MissingPolicy&) const = default;
};

// Fitted preprocessing for one training partition.
struct TransformState {
  FeatureSchema schema;
  ScalerState scaler;
  EncoderState encoder;
  MissingPolicy missing;

  bool operator==(const TransformState&) const = default;

  // Schema of transformed tables: same names, every column numeric.
  FeatureSchema prepared_schema() const;
};

TransformState fit_transform(const Dataset& train, const MissingPolicy& missing = {});
Dataset apply_transform(const TransformState& state, const Dataset& data);

nlohmann::ordered_json transform_to_json(const TransformState& state);
TransformState transform_from_json(const nlohmann::json& doc);
void save_transform(const std::filesystem::path& path, const TransformState& state);
TransformState load_transform(const std::filesystem::path& path);

}  // namespace imbboost::prep
