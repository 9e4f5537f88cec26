#pragma once

// JSON helpers shared by the config and sweep-recipe loaders.

#include <string>
#include <string_view>

#include <json.hpp>

#include "aoi/model.hpp"

namespace aoi::detail {

/// Parses text, rethrowing syntax errors as ConfigError with line/column.
nlohmann::ordered_json parse_document(std::string_view text);

/// Reads the config fields out of obj (other keys are ignored) and validates.
NetworkConfig config_from_json(const nlohmann::ordered_json& obj);

nlohmann::ordered_json config_to_json(const NetworkConfig& config);

std::string read_file(const std::string& path);

}  // namespace aoi::detail
