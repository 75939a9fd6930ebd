#include "imbboost/model_io.hpp"

#include <fstream>
#include <sstream>

#include "imbboost/error.hpp"

namespace imbboost::gbt {

namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<double>();
}

Json node_to_json(const Tree& tree, std::int32_t index) {
  const TreeNode& n = tree.nodes()[index];
  if (n.is_leaf()) return Json{{"leaf", n.weight}};
  Json out;
  out["feature"] = n.feature;
  out["threshold"] = n.threshold;
  out["default"] = n.default_direction == Direction::left ? "left" : "right";
  out["left"] = node_to_json(tree, n.left);
  out["right"] = node_to_json(tree, n.right);
  return out;
}

// Breadth-first with sibling pairs adjacent, the order the builder grows
// trees in, so a reloaded tree compares equal node for node.
std::vector<TreeNode> nodes_from_json(const nlohmann::json& doc) {
  std::vector<TreeNode> nodes(1);
  std::vector<const nlohmann::json*> pending{&doc};
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& d = *pending[i];
    if (d.contains("leaf")) {
      nodes[i].weight = d.at("leaf").get<double>();
      continue;
    }
    TreeNode& n = nodes[i];
    n.feature = d.at("feature").get<std::int32_t>();
    n.threshold = d.at("threshold").get<double>();
    const auto dir = d.at("default").get<std::string>();
    if (dir != "left" && dir != "right") throw Error("bad model: default direction '" + dir + "'");
    n.default_direction = dir == "left" ? Direction::left : Direction::right;
    n.left = static_cast<std::int32_t>(nodes.size());
    n.right = n.left + 1;
    nodes.resize(nodes.size() + 2);
    pending.push_back(&d.at("left"));
    pending.push_back(&d.at("right"));
  }
  return nodes;
}

}  // namespace

nlohmann::ordered_json config_to_json(const TrainConfig& c) {
  Json doc;
  doc["scale_pos_weight"] = c.objective.scale_pos_weight;
  doc["weighted_alpha"] = optional_number(c.objective.weighted_alpha);
  doc["focal_gamma"] = optional_number(c.objective.focal_gamma);
  doc["max_depth"] = c.max_depth;
  doc["learning_rate"] = c.learning_rate;
  doc["subsample"] = c.subsample;
  doc["colsample_bytree"] = c.colsample_bytree;
  doc["n_trees"] = c.n_trees;
  doc["l2_lambda"] = c.l2_lambda;
  doc["min_split_loss"] = c.min_split_loss;
  doc["min_child_hessian"] = c.min_child_hessian;
  doc["seed"] = c.seed;
  doc["eval_metric"] = "aucpr";
  return doc;
}

TrainConfig config_from_json(const nlohmann::json& doc) {
  TrainConfig c;
  c.objective.scale_pos_weight = doc.at("scale_pos_weight").get<double>();
  c.objective.weighted_alpha = read_optional(doc, "weighted_alpha");
  c.objective.focal_gamma = read_optional(doc, "focal_gamma");
  c.max_depth = doc.at("max_depth").get<int>();
  c.learning_rate = doc.at("learning_rate").get<double>();
  c.subsample = doc.at("subsample").get<double>();
  c.colsample_bytree = doc.at("colsample_bytree").get<double>();
  c.n_trees = doc.at("n_trees").get<int>();
  c.l2_lambda = doc.at("l2_lambda").get<double>();
  c.min_split_loss = doc.at("min_split_loss").get<double>();
  c.min_child_hessian = doc.at("min_child_hessian").get<double>();
  c.seed = doc.at("seed").get<std::uint64_t>();
  return c;
}

nlohmann::ordered_json tree_to_json(const Tree& tree) { return node_to_json(tree, 0); }

Tree tree_from_json(const nlohmann::json& doc) {
  return tree_from_nodes(nodes_from_json(doc));
}

nlohmann::ordered_json model_to_json(const Ensemble& model) {
  Json doc;
  doc["format"] = "imbboost-model";
  doc["version"] = kModelFormatVersion;
  const auto& obj = model.objective();
  doc["objective"] = {{"tag", obj.tag()},
                      {"scale_pos_weight", obj.scale_pos_weight},
                      {"weighted_alpha", optional_number(obj.weighted_alpha)},
                      {"focal_gamma", optional_number(obj.focal_gamma)}};
  doc["base_margin"] = model.base_margin();
  doc["schema_fingerprint"] = model.schema_fingerprint();
  doc["features"] = model.feature_names();
  doc["config"] = model.config() ? config_to_json(*model.config()) : Json(nullptr);
  auto trees = Json::array();
  for (const Tree& t : model.trees()) trees.push_back(tree_to_json(t));
  doc["trees"] = std::move(trees);
  return doc;
}

Ensemble model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "imbboost-model") throw Error("bad model: not a model document");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw Error("bad model: unsupported version " + doc.at("version").dump());
    }
    ObjectiveParams obj;
    const auto& o = doc.at("objective");
    obj.scale_pos_weight = o.at("scale_pos_weight").get<double>();
    obj.weighted_alpha = read_optional(o, "weighted_alpha");
    obj.focal_gamma = read_optional(o, "focal_gamma");
    obj.validate();
    std::vector<Tree> trees;
    for (const auto& t : doc.at("trees")) trees.push_back(tree_from_json(t));
    Ensemble model(std::move(trees), doc.at("base_margin").get<double>(), obj,
                   doc.at("features").get<std::vector<std::string>>());
    if (model.schema_fingerprint() != doc.at("schema_fingerprint").get<std::string>()) {
      throw Error("bad model: schema fingerprint does not match feature names");
    }
    for (const Tree& t : model.trees()) {
      for (const TreeNode& n : t.nodes()) {
        if (!n.is_leaf() && static_cast<std::size_t>(n.feature) >= model.feature_names().size()) {
          throw Error("bad model: split on feature index out of range");
        }
      }
    }
    if (doc.contains("config") && !doc["config"].is_null()) model.set_config(config_from_json(doc["config"]));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad model: ") + e.what());
  }
}

std::string dump_model(const ModelFile& file) {
  Json doc = model_to_json(file.model);
  doc["transform"] = file.transform ? prep::transform_to_json(*file.transform) : Json(nullptr);
  return doc.dump(1) + "\n";
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_model(file);
  if (!out) throw Error("write failed: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad model: " + std::string(e.what()));
  }
  ModelFile file{model_from_json(doc), std::nullopt};
  if (doc.contains("transform") && !doc["transform"].is_null()) {
    file.transform = prep::transform_from_json(doc["transform"]);
  }
  return file;
}

}  // namespace imbboost::gbt
