#include "imbboost/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>

#include "imbboost/error.hpp"

namespace imbboost {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

template <typename T>
void fnv_value(std::uint64_t& h, const T& v) {
  fnv_bytes(h, &v, sizeof(T));
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

ColumnKind column_kind_from_string(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  throw Error("bad schema: unknown column kind '" + std::string(text) + "'");
}

void FeatureSchema::validate() const {
  if (columns.empty()) throw Error("bad schema: no feature columns");
  if (label_column.empty()) throw Error("bad schema: label column not named");
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (c.name.empty()) throw Error("bad schema: empty column name");
    if (!seen.insert(c.name).second) throw Error("bad schema: duplicate column '" + c.name + "'");
  }
  if (seen.contains(label_column)) {
    throw Error("bad schema: label column '" + label_column + "' listed as a feature");
  }
  if (time_column) {
    if (seen.contains(*time_column) || *time_column == label_column) {
      throw Error("bad schema: time column '" + *time_column + "' collides with another column");
    }
  }
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const auto& c : columns) names.push_back(c.name);
  return names;
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return j;
  }
  return std::nullopt;
}

nlohmann::ordered_json schema_to_json(const FeatureSchema& schema) {
  nlohmann::ordered_json doc;
  auto cols = nlohmann::ordered_json::array();
  for (const auto& c : schema.columns) {
    cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
  }
  doc["columns"] = std::move(cols);
  doc["label"] = schema.label_column;
  doc["time"] = schema.time_column ? nlohmann::ordered_json(*schema.time_column) : nullptr;
  return doc;
}

FeatureSchema schema_from_json(const nlohmann::json& doc) {
  FeatureSchema schema;
  try {
    for (const auto& c : doc.at("columns")) {
      schema.columns.push_back(
          {c.at("name").get<std::string>(), column_kind_from_string(c.at("kind").get<std::string>())});
    }
    schema.label_column = doc.at("label").get<std::string>();
    if (doc.contains("time") && !doc["time"].is_null()) {
      schema.time_column = doc["time"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad schema: " + path.string() + ": " + e.what());
  }
  return schema_from_json(doc);
}

void save_schema(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << schema_to_json(schema).dump(2) << '\n';
}

std::string schema_fingerprint(const FeatureSchema& schema) { return names_fingerprint(schema.feature_names()); }

std::string names_fingerprint(const std::vector<std::string>& feature_names) {
  std::uint64_t h = kFnvOffset;
  for (const auto& name : feature_names) {
    fnv_bytes(h, name.data(), name.size());
    const char sep = '\x1f';
    fnv_bytes(h, &sep, 1);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool is_missing(double value) { return std::isnan(value); }

Dataset::Dataset(FeatureSchema schema, std::vector<ColumnData> columns,
                 std::vector<std::uint8_t> labels,
                 std::optional<std::vector<std::int64_t>> time_index)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      time_index_(std::move(time_index)) {
  if (columns_.size() != schema_.columns.size()) {
    throw Error("dataset: column count does not match schema");
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const std::size_t n = std::visit([](const auto& c) { return c.size(); }, columns_[j]);
    if (n != labels_.size()) throw Error("dataset: column '" + schema_.columns[j].name + "' length differs from label count");
    if (schema_.columns[j].kind == ColumnKind::numeric && !is_numeric_storage(j)) {
      throw Error("dataset: numeric column '" + schema_.columns[j].name + "' holds tokens");
    }
  }
  for (auto y : labels_) {
    if (y > 1) throw Error("non-binary label");
  }
  if (time_index_) {
    if (time_index_->size() != labels_.size()) throw Error("dataset: time index length differs from label count");
    if (!std::is_sorted(time_index_->begin(), time_index_->end())) {
      throw Error("dataset: time index not sorted");
    }
  }
}

bool Dataset::is_numeric_storage(std::size_t j) const {
  return std::holds_alternative<NumericColumn>(columns_.at(j));
}

const NumericColumn& Dataset::numeric(std::size_t j) const {
  if (!is_numeric_storage(j)) {
    throw Error("column '" + schema_.columns.at(j).name + "' is not numeric (encode it first)");
  }
  return std::get<NumericColumn>(columns_[j]);
}

std::span<const std::int64_t> Dataset::time_index() const {
  if (!time_index_) throw Error("missing time index");
  return *time_index_;
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

std::size_t Dataset::missing_cells() const {
  std::size_t n = 0;
  for (const auto& col : columns_) {
    if (const auto* num = std::get_if<NumericColumn>(&col)) {
      n += static_cast<std::size_t>(std::count_if(num->begin(), num->end(), is_missing));
    } else {
      const auto& tok = std::get<TokenColumn>(col);
      n += static_cast<std::size_t>(
          std::count_if(tok.begin(), tok.end(), [](const std::string& s) { return s.empty(); }));
    }
  }
  return n;
}

Dataset Dataset::select(std::span<const std::size_t> row_ids) const {
  std::vector<ColumnData> cols;
  cols.reserve(columns_.size());
  for (const auto& col : columns_) {
    std::visit(
        [&](const auto& c) {
          std::remove_cvref_t<decltype(c)> out;
          out.reserve(row_ids.size());
          for (auto r : row_ids) out.push_back(c.at(r));
          cols.emplace_back(std::move(out));
        },
        col);
  }
  std::vector<std::uint8_t> labels;
  labels.reserve(row_ids.size());
  for (auto r : row_ids) labels.push_back(labels_.at(r));
  std::optional<std::vector<std::int64_t>> time;
  if (time_index_) {
    time.emplace();
    time->reserve(row_ids.size());
    for (auto r : row_ids) time->push_back((*time_index_)[r]);
  }
  return Dataset(schema_, std::move(cols), std::move(labels), std::move(time));
}

Dataset Dataset::with_columns(std::vector<ColumnData> columns) const {
  return Dataset(schema_, std::move(columns), labels_, time_index_);
}

bool Dataset::identical(const Dataset& other) const {
  if (schema_ != other.schema_ || labels_ != other.labels_ || time_index_ != other.time_index_ ||
      columns_.size() != other.columns_.size()) {
    return false;
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& a = columns_[j];
    const auto& b = other.columns_[j];
    if (a.index() != b.index()) return false;
    if (const auto* na = std::get_if<NumericColumn>(&a)) {
      const auto& nb = std::get<NumericColumn>(b);
      if (na->size() != nb.size()) return false;
      for (std::size_t i = 0; i < na->size(); ++i) {
        if (std::bit_cast<std::uint64_t>((*na)[i]) != std::bit_cast<std::uint64_t>(nb[i])) return false;
      }
    } else if (std::get<TokenColumn>(a) != std::get<TokenColumn>(b)) {
      return false;
    }
  }
  return true;
}

std::uint64_t content_hash(const Dataset& data) {
  std::uint64_t h = kFnvOffset;
  for (const auto& col : data.columns()) {
    if (const auto* num = std::get_if<NumericColumn>(&col)) {
      for (double v : *num) fnv_value(h, std::bit_cast<std::uint64_t>(v));
    } else {
      for (const auto& s : std::get<TokenColumn>(col)) {
        fnv_bytes(h, s.data(), s.size());
        fnv_value(h, std::uint8_t{0});
      }
    }
  }
  for (auto y : data.labels()) fnv_value(h, y);
  if (data.has_time()) {
    for (auto t : data.time_index()) fnv_value(h, t);
  }
  return h;
}

std::vector<std::size_t> rows_with_label(const Dataset& data, std::uint8_t label) {
  std::vector<std::size_t> out;
  const auto labels = data.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

}  // namespace imbboost
