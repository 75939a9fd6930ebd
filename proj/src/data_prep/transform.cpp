#include "imbboost/transform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "imbboost/error.hpp"

namespace imbboost::prep {

namespace {

void require_non_empty(const Dataset& train) {
  if (train.rows() == 0) throw Error("empty dataset");
}

}  // namespace

std::int64_t CategoryCodes::code_of(std::string_view token) const {
  if (token.empty()) return EncoderState::kReservedCode;
  auto it = std::lower_bound(tokens.begin(), tokens.end(), token);
  if (it == tokens.end() || *it != token) return EncoderState::kReservedCode;
  return static_cast<std::int64_t>(it - tokens.begin());
}

ScalerState fit_scaler(const Dataset& train) {
  require_non_empty(train);
  ScalerState state;
  const auto& schema = train.schema();
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    if (schema.columns[j].kind != ColumnKind::numeric) continue;
    ColumnRange range{schema.columns[j].name};
    bool any = false;
    for (double v : train.numeric(j)) {
      if (is_missing(v)) continue;
      if (!any) {
        range.min = range.max = v;
        any = true;
      } else {
        range.min = std::min(range.min, v);
        range.max = std::max(range.max, v);
      }
    }
    range.degenerate = !any || range.min == range.max;
    state.ranges.push_back(range);
  }
  return state;
}

Dataset apply_scaler(const ScalerState& state, const Dataset& data) {
  const auto& schema = data.schema();
  std::vector<ColumnData> columns = data.columns();
  std::size_t next = 0;
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    if (schema.columns[j].kind != ColumnKind::numeric) continue;
    if (next >= state.ranges.size() || state.ranges[next].column != schema.columns[j].name) {
      throw Error("column mismatch: scaler has no range for '" + schema.columns[j].name + "'");
    }
    const ColumnRange& r = state.ranges[next++];
    auto& col = std::get<NumericColumn>(columns[j]);
    const double span = r.max - r.min;
    for (double& v : col) {
      if (is_missing(v)) continue;
      v = r.degenerate ? 0.0 : std::clamp((v - r.min) / span, 0.0, 1.0);
    }
  }
  if (next != state.ranges.size()) throw Error("column mismatch: scaler covers columns absent from data");
  return data.with_columns(std::move(columns));
}

EncoderState fit_encoder(const Dataset& train) {
  require_non_empty(train);
  EncoderState state;
  const auto& schema = train.schema();
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    if (schema.columns[j].kind != ColumnKind::categorical) continue;
    const auto* tokens = std::get_if<TokenColumn>(&train.column(j));
    if (tokens == nullptr) throw Error("categorical column '" + schema.columns[j].name + "' is already encoded");
    std::set<std::string> distinct;
    for (const auto& t : *tokens) {
      if (!t.empty()) distinct.insert(t);
    }
    state.columns.push_back({schema.columns[j].name, {distinct.begin(), distinct.end()}});
  }
  return state;
}

Dataset apply_encoder(const EncoderState& state, const Dataset& data) {
  const auto& schema = data.schema();
  std::vector<ColumnData> columns = data.columns();
  std::size_t next = 0;
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    if (schema.columns[j].kind != ColumnKind::categorical) continue;
    if (next >= state.columns.size() || state.columns[next].column != schema.columns[j].name) {
      throw Error("column mismatch: encoder has no codes for '" + schema.columns[j].name + "'");
    }
    const CategoryCodes& codes = state.columns[next++];
    const auto* tokens = std::get_if<TokenColumn>(&columns[j]);
    if (tokens == nullptr) throw Error("categorical column '" + schema.columns[j].name + "' is already encoded");
    NumericColumn encoded(tokens->size());
    for (std::size_t i = 0; i < tokens->size(); ++i) {
      encoded[i] = static_cast<double>(codes.code_of((*tokens)[i]));
    }
    columns[j] = std::move(encoded);
  }
  if (next != state.columns.size()) throw Error("column mismatch: encoder covers columns absent from data");
  return data.with_columns(std::move(columns));
}

Dataset replace_missing(const Dataset& data, double fill) {
  std::vector<ColumnData> columns = data.columns();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (data.schema().columns[j].kind != ColumnKind::numeric) continue;
    for (double& v : std::get<NumericColumn>(columns[j])) {
      if (is_missing(v)) v = fill;
    }
  }
  return data.with_columns(std::move(columns));
}

FeatureSchema TransformState::prepared_schema() const {
  FeatureSchema out = schema;
  for (auto& c : out.columns) c.kind = ColumnKind::numeric;
  return out;
}

TransformState fit_transform(const Dataset& train, const MissingPolicy& missing) {
  return {train.schema(), fit_scaler(train), fit_encoder(train), missing};
}

Dataset apply_transform(const TransformState& state, const Dataset& data) {
  if (data.schema().feature_names() != state.schema.feature_names()) {
    throw Error("column mismatch: data columns differ from the fitted transform");
  }
  Dataset out = apply_encoder(state.encoder, apply_scaler(state.scaler, data));
  if (state.missing.mode == MissingMode::fill) out = replace_missing(out, state.missing.fill_value);
  return Dataset(state.prepared_schema(), out.columns(), {out.labels().begin(), out.labels().end()},
                 out.has_time() ? std::optional(std::vector<std::int64_t>(out.time_index().begin(),
                                                                          out.time_index().end()))
                                : std::nullopt);
}

nlohmann::ordered_json transform_to_json(const TransformState& state) {
  nlohmann::ordered_json doc;
  doc["format"] = "imbboost-transform";
  doc["version"] = kTransformFormatVersion;
  doc["schema"] = schema_to_json(state.schema);
  auto scaler = nlohmann::ordered_json::array();
  for (const auto& r : state.scaler.ranges) {
    scaler.push_back({{"column", r.column}, {"min", r.min}, {"max", r.max}, {"degenerate", r.degenerate}});
  }
  doc["scaler"] = std::move(scaler);
  auto encoder = nlohmann::ordered_json::array();
  for (const auto& c : state.encoder.columns) {
    encoder.push_back({{"column", c.column}, {"tokens", c.tokens}});
  }
  doc["encoder"] = {{"reserved_code", EncoderState::kReservedCode}, {"columns", std::move(encoder)}};
  doc["missing"] = {{"mode", state.missing.mode == MissingMode::fill ? "fill" : "default-direction"},
                    {"fill_value", state.missing.fill_value}};
  return doc;
}

TransformState transform_from_json(const nlohmann::json& doc) {
  TransformState state;
  try {
    if (doc.at("format") != "imbboost-transform") throw Error("not a transform state document");
    if (doc.at("version").get<int>() != kTransformFormatVersion) {
      throw Error("unsupported transform state version " + doc.at("version").dump());
    }
    state.schema = schema_from_json(doc.at("schema"));
    for (const auto& r : doc.at("scaler")) {
      state.scaler.ranges.push_back({r.at("column").get<std::string>(), r.at("min").get<double>(),
                                     r.at("max").get<double>(), r.at("degenerate").get<bool>()});
    }
    for (const auto& c : doc.at("encoder").at("columns")) {
      state.encoder.columns.push_back(
          {c.at("column").get<std::string>(), c.at("tokens").get<std::vector<std::string>>()});
    }
    const auto mode = doc.at("missing").at("mode").get<std::string>();
    if (mode == "fill") {
      state.missing.mode = MissingMode::fill;
    } else if (mode == "default-direction") {
      state.missing.mode = MissingMode::default_direction;
    } else {
      throw Error("unknown missing mode '" + mode + "'");
    }
    state.missing.fill_value = doc.at("missing").at("fill_value").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad transform state: ") + e.what());
  }
  return state;
}

void save_transform(const std::filesystem::path& path, const TransformState& state) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << transform_to_json(state).dump(2) << '\n';
}

TransformState load_transform(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad transform state: " + std::string(e.what()));
  }
  return transform_from_json(doc);
}

}  // namespace imbboost::prep
