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

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "teleop/sim_world.hpp"

namespace teleop {

/// Invalid configuration; path() is a JSON pointer to the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Readers take the JSON value and its pointer path (for error messages).
// Missing optional keys keep the value from `base`.

Vec3 parse_vec3(const nlohmann::json& j, const std::string& path);
Vec6 parse_vec6(const nlohmann::json& j, const std::string& path);
/// [w, x, y, z]; normalized, must be non-zero.
UnitQuaternion parse_quaternion(const nlohmann::json& j, const std::string& path);
/// {"position": [x, y, z], "orientation": [w, x, y, z]}
Pose parse_pose(const nlohmann::json& j, const std::string& path);

EhccParams parse_ehcc(const nlohmann::json& j, const std::string& path, const EhccParams& base);
AdmittanceParams parse_admittance(const nlohmann::json& j, const std::string& path,
                                  const AdmittanceParams& base);
SafetyConfig parse_safety(const nlohmann::json& j, const std::string& path,
                          const SafetyConfig& base, EmergencyPolicy* policy);
HfcParams parse_hfc(const nlohmann::json& j, const std::string& path, const HfcParams& base);
TremorSpec parse_tremor(const nlohmann::json& j, const std::string& path, std::uint64_t seed);
LeaderScript parse_script(const nlohmann::json& j, const std::string& path, std::uint64_t seed);
ContactSurface parse_surface(const nlohmann::json& j, const std::string& path);
WorldConfig parse_world(const nlohmann::json& j, const std::string& path, std::uint64_t seed);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Vec6& v);
nlohmann::json to_json(const UnitQuaternion& q);
nlohmann::json to_json(const Pose& p);
nlohmann::json to_json(const EhccParams& p);
nlohmann::json to_json(const AdmittanceParams& p);
nlohmann::json to_json(const SafetyConfig& s, EmergencyPolicy policy);
nlohmann::json to_json(const HfcParams& p);
nlohmann::json to_json(const TremorSpec& t);
nlohmann::json to_json(const LeaderScript& s);
nlohmann::json to_json(const ContactSurface& s);
nlohmann::json to_json(const WorldConfig& w);

}  // namespace teleop
