#include "fedrank/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InvalidInput("config section '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidInput("unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

TrainConfig parse_train_config(const std::string& json_text) {
  TrainConfig cfg;
  try {
    const json root = json::parse(json_text);
    reject_unknown(root, {"ca", "ss", "shard_depth"}, "config");
    read(root, "shard_depth", cfg.shard_depth);
    if (root.contains("ca")) {
      const json& ca = root.at("ca");
      reject_unknown(ca, {"k", "step", "step_levels", "max_sweeps", "tolerance", "restarts", "seed"}, "ca");
      read(ca, "k", cfg.ca.k);
      read(ca, "step", cfg.ca.step);
      read(ca, "step_levels", cfg.ca.step_levels);
      read(ca, "max_sweeps", cfg.ca.max_sweeps);
      read(ca, "tolerance", cfg.ca.tolerance);
      read(ca, "restarts", cfg.ca.restarts);
      read(ca, "seed", cfg.ca.seed);
    }
    if (root.contains("ss")) {
      const json& ss = root.at("ss");
      reject_unknown(ss,
                     {"k", "epsilon", "max_iter", "max_stagnation", "reflection", "expansion",
                      "contraction", "shrinkage", "init_subsample", "init_epochs",
                      "init_learning_rate", "init_l2", "normalization", "seed"},
                     "ss");
      read(ss, "k", cfg.ss.k);
      read(ss, "epsilon", cfg.ss.epsilon);
      read(ss, "max_iter", cfg.ss.max_iter);
      read(ss, "max_stagnation", cfg.ss.max_stagnation);
      read(ss, "reflection", cfg.ss.reflection);
      read(ss, "expansion", cfg.ss.expansion);
      read(ss, "contraction", cfg.ss.contraction);
      read(ss, "shrinkage", cfg.ss.shrinkage);
      read(ss, "init_subsample", cfg.ss.init_subsample);
      read(ss, "init_epochs", cfg.ss.init_epochs);
      read(ss, "init_learning_rate", cfg.ss.init_learning_rate);
      read(ss, "init_l2", cfg.ss.init_l2);
      read(ss, "seed", cfg.ss.seed);
      if (ss.contains("normalization")) {
        cfg.ss.normalization = parse_score_normalization(ss.at("normalization").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
  if (cfg.shard_depth == 0) throw InvalidInput("shard_depth must be >= 1");
  cfg.ca.validate();
  cfg.ss.validate();
  return cfg;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_train_config(buffer.str());
}

}  // namespace fedrank
