#include "fedrank/model_io.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fedrank/dataset_io.hpp"
#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

using nlohmann::json;

json metadata_json(const ModelMetadata& m) {
  return json{{"objective", m.objective},
              {"seed", m.seed},
              {"iterations", m.iterations},
              {"initializer", m.initializer},
              {"initial_objective", m.initial_objective},
              {"final_objective", m.final_objective},
              {"created_at", m.created_at ? json(*m.created_at) : json(nullptr)}};
}

ModelMetadata metadata_from(const json& j) {
  ModelMetadata m;
  m.objective = j.at("objective").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.iterations = j.value("iterations", std::size_t{0});
  m.initializer = j.value("initializer", std::string{});
  m.initial_objective = j.value("initial_objective", 0.0);
  m.final_objective = j.value("final_objective", 0.0);
  if (j.contains("created_at") && !j.at("created_at").is_null()) {
    m.created_at = j.at("created_at").get<std::string>();
  }
  return m;
}

double finite_weight(const json& v) {
  const double w = v.get<double>();
  if (!std::isfinite(w)) throw InvalidInput("model weight is not finite");
  return w;
}

std::map<std::string, double> weight_map(const json& j) {
  std::map<std::string, double> out;
  for (const auto& [name, value] : j.items()) out[name] = finite_weight(value);
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize_model(const LinearModel& model) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = "linear";
  j["weights"] = model.weights;
  j["metadata"] = metadata_json(model.metadata);
  return dump(j);
}

std::string serialize_model(const FusionModel& model) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = "fusion";
  j["weights"] = model.weights;
  j["init_weights"] = model.init_weights;
  j["score_normalization"] = model.score_normalization;
  j["metadata"] = metadata_json(model.metadata);
  return dump(j);
}

AnyModel parse_model(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw InvalidInput("unsupported model schema_version " + std::to_string(version));
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
      LinearModel m;
      for (const auto& w : j.at("weights")) m.weights.push_back(finite_weight(w));
      m.metadata = metadata_from(j.at("metadata"));
      return m;
    }
    if (kind == "fusion") {
      FusionModel m;
      m.weights = weight_map(j.at("weights"));
      if (j.contains("init_weights")) m.init_weights = weight_map(j.at("init_weights"));
      m.score_normalization = j.value("score_normalization", std::string("none"));
      m.metadata = metadata_from(j.at("metadata"));
      return m;
    }
    throw InvalidInput("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed model file: ") + e.what());
  }
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

LinearModel load_linear_model(const std::filesystem::path& path) {
  auto model = load_model(path);
  if (auto* m = std::get_if<LinearModel>(&model)) return std::move(*m);
  throw InvalidInput(path.string() + " is not a linear model");
}

FusionModel load_fusion_model(const std::filesystem::path& path) {
  auto model = load_model(path);
  if (auto* m = std::get_if<FusionModel>(&model)) return std::move(*m);
  throw InvalidInput(path.string() + " is not a fusion model");
}

void save_model(const std::filesystem::path& path, const LinearModel& model) {
  write_file_atomic(path, serialize_model(model));
}

void save_model(const std::filesystem::path& path, const FusionModel& model) {
  write_file_atomic(path, serialize_model(model));
}

std::optional<std::string> model_timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return std::nullopt;
  std::time_t t = 0;
  try {
    t = static_cast<std::time_t>(std::stoll(epoch));
  } catch (const std::exception&) {
    throw InvalidInput("SOURCE_DATE_EPOCH is not an integer");
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace fedrank
