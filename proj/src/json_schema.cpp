#include "clockforge/json_schema.hpp"

namespace clockforge::jsonschema {

namespace {

bool type_matches(const std::string& type, const nlohmann::json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  return false;
}

void check(const nlohmann::json& schema, const nlohmann::json& v,
           const std::string& path, std::vector<std::string>& errors) {
  if (schema.contains("type") &&
      !type_matches(schema["type"].get<std::string>(), v)) {
    errors.push_back(path + ": expected " +
                     schema["type"].get<std::string>());
    return;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& allowed : schema["enum"])
      if (allowed == v) hit = true;
    if (!hit) errors.push_back(path + ": value not in enum");
  }
  if (schema.contains("minimum") && v.is_number() &&
      v.get<double>() < schema["minimum"].get<double>())
    errors.push_back(path + ": below minimum");
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!v.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key '" +
                           key.get<std::string>() + "'");
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (v.contains(key)) check(sub, v.at(key), path + "/" + key, errors);
  }
  if (v.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i)
      check(schema["items"], v[i], path + "[" + std::to_string(i) + "]",
            errors);
  }
}

}  // namespace

std::vector<std::string> validate(const nlohmann::json& schema,
                                  const nlohmann::json& document) {
  std::vector<std::string> errors;
  check(schema, document, "$", errors);
  return errors;
}

}  // namespace clockforge::jsonschema
