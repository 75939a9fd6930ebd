#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace imbboost {

enum class ColumnKind { numeric, categorical };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;

  bool operator==(const ColumnSpec&) const = default;
};

// Describes the feature columns of a table plus where the label and the
// optional time ordinal live. Feature order is the model's column order.
struct FeatureSchema {
  std::vector<ColumnSpec> columns;
  std::string label_column;
  std::optional<std::string> time_column;

  bool operator==(const FeatureSchema&) const = default;

  // Throws Error when names collide, the label is listed as a feature,
  // or there are no feature columns.
  void validate() const;

  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> find(std::string_view name) const;
};

nlohmann::ordered_json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const nlohmann::json& doc);
FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const std::filesystem::path& path, const FeatureSchema& schema);

// FNV-1a over the ordered feature names. Models record it so prediction can
// reject tables whose columns differ from the training table.
std::string schema_fingerprint(const FeatureSchema& schema);
std::string names_fingerprint(const std::vector<std::string>& feature_names);

// Numeric cells (and encoded categorical codes). NaN marks a missing cell.
using NumericColumn = std::vector<double>;
// Raw categorical tokens. The empty string marks a missing cell.
using TokenColumn = std::vector<std::string>;
using ColumnData = std::variant<NumericColumn, TokenColumn>;

bool is_missing(double value);

// Column-major labeled table. Numeric columns always hold NumericColumn;
// categorical columns hold tokens until encoded, then integer codes.
class Dataset {
 public:
  Dataset() = default;
  Dataset(FeatureSchema schema, std::vector<ColumnData> columns, std::vector<std::uint8_t> labels,
          std::optional<std::vector<std::int64_t>> time_index = std::nullopt);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t rows() const { return labels_.size(); }
  std::size_t features() const { return columns_.size(); }

  const ColumnData& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<ColumnData>& columns() const { return columns_; }
  bool is_numeric_storage(std::size_t j) const;
  // Requires numeric storage; throws otherwise.
  const NumericColumn& numeric(std::size_t j) const;

  std::span<const std::uint8_t> labels() const { return labels_; }
  bool has_time() const { return time_index_.has_value(); }
  std::span<const std::int64_t> time_index() const;

  std::size_t positives() const;
  std::size_t negatives() const { return rows() - positives(); }
  std::size_t missing_cells() const;

  // Rows in the given order. Callers keep indices ascending when the table
  // carries a time index (the invariant is re-checked).
  Dataset select(std::span<const std::size_t> row_ids) const;

  // Same rows, columns replaced (used by transforms).
  Dataset with_columns(std::vector<ColumnData> columns) const;

  // Bitwise equality of every cell, label and time value.
  bool identical(const Dataset& other) const;

 private:
  FeatureSchema schema_;
  std::vector<ColumnData> columns_;
  std::vector<std::uint8_t> labels_;
  std::optional<std::vector<std::int64_t>> time_index_;
};

// Content hash over cells, labels and time (64-bit FNV-1a on raw bytes).
std::uint64_t content_hash(const Dataset& data);

// Indices of rows with the given label, ascending.
std::vector<std::size_t> rows_with_label(const Dataset& data, std::uint8_t label);

}  // namespace imbboost
