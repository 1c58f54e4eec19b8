#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "fedrank/core.hpp"

namespace fedrank {

inline constexpr int kModelSchemaVersion = 1;

using AnyModel = std::variant<LinearModel, FusionModel>;

/// Pretty-printed JSON, newline terminated. Doubles are written in shortest
/// round-trip form, so parse_model(serialize_model(m)) == m.
std::string serialize_model(const LinearModel& model);
std::string serialize_model(const FusionModel& model);

AnyModel parse_model(const std::string& json_text);
AnyModel load_model(const std::filesystem::path& path);
LinearModel load_linear_model(const std::filesystem::path& path);
FusionModel load_fusion_model(const std::filesystem::path& path);

void save_model(const std::filesystem::path& path, const LinearModel& model);
void save_model(const std::filesystem::path& path, const FusionModel& model);

/// created_at value for new models: SOURCE_DATE_EPOCH as an ISO-8601 UTC
/// timestamp when set, otherwise empty so repeated runs stay byte-identical.
std::optional<std::string> model_timestamp();

}  // namespace fedrank
