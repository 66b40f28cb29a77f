// Copyright 2026 The teleop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "teleop/config.hpp"

namespace teleop::detail {

inline const nlohmann::json* child(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) {
    return nullptr;
  }
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& path) {
  if (!j.is_object()) {
    throw ConfigError(path, "expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(path + "/" + key, "required key is missing");
  }
  return *it;
}

/// Rejects non-objects and keys outside the allowed set.
inline void check_keys(const nlohmann::json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(path, "expected an object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(path + "/" + item.key(), "unknown key");
    }
  }
}

inline double number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ConfigError(path, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ConfigError(path, "must be finite");
  }
  return v;
}

inline std::uint64_t unsigned_integer(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

inline std::string string(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) {
    throw ConfigError(path, "expected a string");
  }
  return j.get<std::string>();
}

}  // namespace teleop::detail
