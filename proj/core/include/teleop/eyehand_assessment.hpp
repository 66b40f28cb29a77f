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

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teleop/sim_world.hpp"

namespace teleop {

/**
 * Free-space eye-hand check in three phases of equal length:
 *   1. translate the stylus along x of the leader base;
 *   2. roll the stylus about its own z axis by `roll`;
 *   3. translate along x of the leader base again.
 * The follower displacement of phases 1 and 3 must lie along the expected
 * robot-base axes.
 */
struct EyeHandAssessmentConfig {
  PipelineParams pipeline;
  WorldConfig world;
  UnitQuaternion stylus_start;
  double phase_duration = 10.0;  // s
  double translation = 0.04;     // m, stylus side
  double roll = -1.5707963267948966;
  TremorSpec tremor;
  double min_fraction = 0.98;
  int expected_axis_phase1 = 0;  // x of the robot base
  int expected_axis_phase3 = 2;  // z of the robot base

  /// Stylus and TCP both start at Rx(-pi/2), so the camera looks along +y
  /// of the robot base; physiological tremor with seed 7.
  static EyeHandAssessmentConfig defaults();
};

EyeHandAssessmentConfig parse_eyehand_config(const nlohmann::json& j);
nlohmann::json to_json(const EyeHandAssessmentConfig& c);

LeaderScript eyehand_script(const EyeHandAssessmentConfig& c);

struct PhaseReport {
  std::string name;
  Vec3 displacement = Vec3::Zero();  // follower, robot base
  double rotation = 0.0;             // follower rotation angle over the phase
  int expected_axis = -1;            // -1: no translation expected
  int dominant_axis = -1;
  double fraction = 0.0;  // |displacement(expected)| / |displacement|
  bool pass = false;
};

struct EyeHandReport {
  std::vector<PhaseReport> phases;
  double final_phi = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
  std::vector<LogRecord> log;
};

EyeHandReport run_eyehand_assessment(const EyeHandAssessmentConfig& c);
nlohmann::json to_json(const EyeHandReport& r);

}  // namespace teleop
