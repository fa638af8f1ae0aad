#include "tdebt/model_io.hpp"

#include <nlohmann/json.hpp>

#include "tdebt/error.hpp"

namespace tdebt {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "tdebt-model";
constexpr int kVersion = 1;

Json tree_to_json(const Tree& tree) {
  Json nodes = Json::array();
  for (const TreeNode& n : tree.nodes)
    nodes.push_back(Json::array({n.feature, n.threshold, n.value, n.left, n.right}));
  return nodes;
}

Tree tree_from_json(const Json& nodes) {
  Tree tree;
  for (const auto& n : nodes) {
    if (!n.is_array() || n.size() != 5)
      throw Error(ErrorKind::Schema, "model: malformed tree node");
    TreeNode node;
    node.feature = n[0].get<std::int32_t>();
    node.threshold = n[1].get<double>();
    node.value = n[2].get<double>();
    node.left = n[3].get<std::int32_t>();
    node.right = n[4].get<std::int32_t>();
    tree.nodes.push_back(node);
  }
  if (tree.nodes.empty()) throw Error(ErrorKind::Schema, "model: empty tree");
  return tree;
}

Json forest_to_json(const std::vector<Tree>& trees) {
  Json out = Json::array();
  for (const Tree& t : trees) out.push_back(tree_to_json(t));
  return out;
}

std::vector<Tree> forest_from_json(const Json& arr) {
  std::vector<Tree> trees;
  for (const auto& t : arr) trees.push_back(tree_from_json(t));
  return trees;
}

}  // namespace

std::string serialize_model(const FittedModel& model) {
  Json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["kind"] = kind_name(model.kind);
  doc["feature_names"] = model.feature_names;

  Json params;
  std::visit(
      [&](const auto& state) {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          params["coefficients"] = state.coefficients;
          params["intercept"] = state.intercept;
        } else if constexpr (std::is_same_v<T, Tree>) {
          params["nodes"] = tree_to_json(state);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          params["trees"] = forest_to_json(state.trees);
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          params["base"] = state.base;
          params["learning_rate"] = state.learning_rate;
          params["stages"] = forest_to_json(state.stages);
        } else if constexpr (std::is_same_v<T, AdaBoostModel>) {
          params["learners"] = forest_to_json(state.learners);
          params["stage_log_weights"] = state.stage_log_weights;
        } else {
          params["weights"] = state.weights;
          params["bias"] = state.bias;
          params["feature_mean"] = state.feature_mean;
          params["feature_scale"] = state.feature_scale;
          params["converged"] = state.converged;
        }
      },
      model.state);
  doc["parameters"] = std::move(params);
  return doc.dump(2) + "\n";
}

FittedModel deserialize_model(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Schema, "model: not valid JSON");
  if (doc.value("format", std::string()) != kFormat)
    throw Error(ErrorKind::Schema, "model: unknown format tag");
  if (doc.value("version", -1) != kVersion)
    throw Error(ErrorKind::Schema, "model: unsupported version");

  auto kind = parse_kind(doc.value("kind", std::string()));
  if (!kind) throw Error(ErrorKind::Schema, "model: unknown kind");

  FittedModel model;
  model.kind = *kind;
  model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  const Json& params = doc.at("parameters");

  try {
    switch (*kind) {
      case RegressorKind::LinearRegression: {
        LinearModel m;
        m.coefficients = params.at("coefficients").get<std::vector<double>>();
        m.intercept = params.at("intercept").get<double>();
        model.state = std::move(m);
        break;
      }
      case RegressorKind::DecisionTree:
        model.state = tree_from_json(params.at("nodes"));
        break;
      case RegressorKind::RandomForest:
      case RegressorKind::ExtraTrees:
      case RegressorKind::Bagging: {
        ForestModel m;
        m.trees = forest_from_json(params.at("trees"));
        model.state = std::move(m);
        break;
      }
      case RegressorKind::GradientBoost: {
        BoostModel m;
        m.base = params.at("base").get<double>();
        m.learning_rate = params.at("learning_rate").get<double>();
        m.stages = forest_from_json(params.at("stages"));
        model.state = std::move(m);
        break;
      }
      case RegressorKind::AdaBoost: {
        AdaBoostModel m;
        m.learners = forest_from_json(params.at("learners"));
        m.stage_log_weights = params.at("stage_log_weights").get<std::vector<double>>();
        if (m.learners.size() != m.stage_log_weights.size())
          throw Error(ErrorKind::Schema, "model: learner/weight count mismatch");
        model.state = std::move(m);
        break;
      }
      case RegressorKind::Svm: {
        SvrModel m;
        m.weights = params.at("weights").get<std::vector<double>>();
        m.bias = params.at("bias").get<double>();
        m.feature_mean = params.at("feature_mean").get<std::vector<double>>();
        m.feature_scale = params.at("feature_scale").get<std::vector<double>>();
        m.converged = params.at("converged").get<bool>();
        model.state = std::move(m);
        break;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("model: ") + e.what());
  }
  return model;
}

}  // namespace tdebt
