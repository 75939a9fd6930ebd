#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "imbboost/booster.hpp"
#include "imbboost/transform.hpp"

namespace imbboost::gbt {

inline constexpr int kModelFormatVersion = 1;

// Model document: objective, base margin, schema fingerprint, feature names,
// training settings and the trees as nested decision/leaf objects. Numbers
// are written in shortest round-trip form, so save -> load is bit-exact.
nlohmann::ordered_json config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const nlohmann::json& doc);

nlohmann::ordered_json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& doc);

nlohmann::ordered_json model_to_json(const Ensemble& model);
Ensemble model_from_json(const nlohmann::json& doc);

// A model file may carry the fitted preprocessing so raw tables can be
// scored directly.
struct ModelFile {
  Ensemble model;
  std::optional<prep::TransformState> transform;
};

std::string dump_model(const ModelFile& file);
void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace imbboost::gbt
