#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace clockforge::jsonschema {

// Structural validator for the subset of JSON Schema the shipped schemas
// use: type, properties, required, items, enum, minimum.  Returns the list
// of violations (empty means valid).
std::vector<std::string> validate(const nlohmann::json& schema,
                                  const nlohmann::json& document);

}  // namespace clockforge::jsonschema
