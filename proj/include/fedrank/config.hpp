#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "fedrank/fusion.hpp"
#include "fedrank/ltr_ca.hpp"

namespace fedrank {

/// Trainer settings read from a --config JSON file, e.g.
///   {"ca": {"step": 0.05, "max_sweeps": 25},
///    "ss": {"epsilon": 0.1, "max_stagnation": 10},
///    "shard_depth": 100}
/// Every key is optional; unknown keys are rejected.
struct TrainConfig {
  CAConfig ca;
  SSConfig ss;
  /// Documents kept per record type before fusion.
  std::size_t shard_depth = 100;
};

TrainConfig parse_train_config(const std::string& json_text);
TrainConfig load_train_config(const std::filesystem::path& path);

}  // namespace fedrank
