#ifndef CKMPLACE_SRC_YAML_UTIL_HPP
#define CKMPLACE_SRC_YAML_UTIL_HPP

#include "ckmplace/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ckmplace::detail {

inline std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) {
    return "";
  }
  return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] inline void fail(const YAML::Node& node, const std::string& message) {
  throw Error(ErrorCode::config, where(node) + message);
}

inline YAML::Node load_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::parse, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

inline void expect_map(const YAML::Node& node, const std::string& context) {
  if (!node.IsMap()) {
    fail(node, context + " must be a mapping");
  }
}

/// Rejects keys outside `allowed`.
inline void allow_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                       const std::string& context) {
  expect_map(map, context);
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown key '" + key + "' in " + context);
    }
  }
}

inline YAML::Node require(const YAML::Node& map, const std::string& key,
                          const std::string& context) {
  const YAML::Node node = map[key];
  if (!node) {
    fail(map, "missing key '" + key + "' in " + context);
  }
  return node;
}

inline double number(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) {
    fail(node, name + " must be a number");
  }
  double value = 0.0;
  if (!YAML::convert<double>::decode(node, value) || !std::isfinite(value)) {
    fail(node, name + " must be a finite number, got '" + node.Scalar() + "'");
  }
  return value;
}

inline double number_or(const YAML::Node& map, const std::string& key, double fallback) {
  const YAML::Node node = map[key];
  return node ? number(node, key) : fallback;
}

inline bool boolean(const YAML::Node& node, const std::string& name) {
  bool value = false;
  if (!node.IsScalar() || !YAML::convert<bool>::decode(node, value)) {
    fail(node, name + " must be true or false");
  }
  return value;
}

inline std::string text(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) {
    fail(node, name + " must be a string");
  }
  return node.Scalar();
}

} // namespace ckmplace::detail

#endif // CKMPLACE_SRC_YAML_UTIL_HPP
