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

#include "teleop/scenario.hpp"

namespace teleop {

// Built-in configurations. Each is also available as JSON through to_json
// so it can be written out, edited and fed back to the CLI.

/// Dental stand-in: a base plane and three spheres of increasing stiffness,
/// each approached along its own direction. Every trial is a 20 s script of
/// press strokes of varying depth against one sphere; trials are numbered
/// sphere * trials_per_sphere + trial and seeded from `seed`.
struct DentalLayout {
  struct Target {
    Sphere sphere;
    double stiffness = 0.0;  // N/m
    double damping = 0.0;    // N s/m
    Rotation3 approach;      // tool orientation; its z axis points into the sphere
  };
  std::vector<Target> targets;
  Plane base;
  double base_stiffness = 20000.0;
  double start_gap = 0.003;  // m, tool tip to sphere surface at the start
  int trials_per_sphere = 3;
  double trial_duration = 20.0;
  double force_scaling_gain = 0.1;  // 1/N, scenario B

  static DentalLayout standard();
};

ScenarioConfig dental_trial(ScenarioId scenario, const DentalLayout& layout, int target, int trial,
                            std::uint64_t seed);
ExperimentConfig dental_experiment(ScenarioId scenario, std::uint64_t seed = 1,
                                   const DentalLayout& layout = DentalLayout::standard());

/// Free-space motion with tremor; no contact.
ScenarioConfig free_space_scenario(ScenarioId scenario, std::uint64_t seed = 1,
                                   double duration = 10.0);

std::vector<std::string> preset_names();
/// JSON for a named preset ("dental-A", "dental-B", "free-space", ...).
/// Throws std::invalid_argument for an unknown name.
nlohmann::json preset_json(const std::string& name, std::uint64_t seed = 1);

}  // namespace teleop
