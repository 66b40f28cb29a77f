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

#include "teleop/presets.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>

#include "teleop/eyehand_assessment.hpp"

namespace teleop {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform in [0, 1) from a hashed counter.
double uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(splitmix64(seed ^ splitmix64(counter)) >> 11) * 0x1.0p-53;
}

}  // namespace

DentalLayout DentalLayout::standard() {
  DentalLayout d;
  const Rotation3 down = elementary_rotation(Axis::kX, kPi);
  d.targets = {
      {{Vec3(0.40, -0.03, 0.0), 0.006}, 2000.0, 5.0, down},
      {{Vec3(0.40, 0.00, 0.0), 0.006}, 5000.0, 10.0, elementary_rotation(Axis::kX, kPi + kPi / 6)},
      {{Vec3(0.40, 0.03, 0.0), 0.006}, 10000.0, 20.0,
       elementary_rotation(Axis::kY, -kPi / 7) * down},
  };
  d.base = {Vec3(0.0, 0.0, -0.004), Vec3::UnitZ()};
  return d;
}

ScenarioConfig dental_trial(ScenarioId scenario, const DentalLayout& layout, int target, int trial,
                            std::uint64_t seed) {
  if (target < 0 || target >= static_cast<int>(layout.targets.size())) {
    throw std::invalid_argument("dental_trial: target out of range");
  }
  const DentalLayout::Target& tg = layout.targets[target];
  const std::uint64_t trial_seed =
      splitmix64(seed * 1000 + static_cast<std::uint64_t>(target * 10 + trial));

  ScenarioConfig c;
  c.name = "dental-" + std::string(to_string(scenario)) + "-s" + std::to_string(target) + "t" +
           std::to_string(trial);
  c.scenario = scenario;
  c.duration = layout.trial_duration;
  c.seed = trial_seed;
  // Above ~0.12 /N the scaled reference chatters against the stiffest
  // sphere: the follower reaches each command within one tick, so the
  // windowed force enters a delayed loop with gain above one.
  c.pipeline.interaction.safety.force_scaling_gain =
      scenario == ScenarioId::kA ? 0.0 : layout.force_scaling_gain;

  const Vec3 dir = tg.approach * Vec3::UnitZ();
  c.world.follower.pose.orientation = tg.approach.to_quaternion();
  c.world.follower.pose.position =
      tg.sphere.center - dir * (tg.sphere.radius + layout.start_gap);
  c.world.surfaces.push_back({tg.sphere, tg.stiffness, tg.damping});
  c.world.surfaces.push_back({layout.base, layout.base_stiffness, 50.0});
  c.world.sensor_noise_std = 0.0;
  c.world.sensor_seed = splitmix64(trial_seed ^ 0x5e45);

  // Start aligned with the tool so engagement is immediate.
  const FrameConfig& fr = c.pipeline.ehcc.frames;
  const Rotation3 stylus = fr.leader_base_in_robot_base.transpose() * tg.approach *
                           fr.tcp_in_stylus.transpose();
  const UnitQuaternion q = stylus.to_quaternion();
  const Vec3 press = fr.leader_base_in_robot_base.transpose() * dir;
  const Vec3 side = fr.leader_base_in_robot_base.transpose() * (tg.approach * Vec3::UnitX());
  const double gain = c.pipeline.ehcc.scaling.translational_gains().minCoeff();

  // Depth beyond the surface on the robot side, spread over strokes so the
  // penetration sweeps the whole analysis range.
  std::array<double, 4> depth = {0.003, 0.0055, 0.008, 0.0095};
  std::rotate(depth.begin(), depth.begin() + (trial + target) % 4, depth.end());

  const Vec3 p0(0.1, 0.0, 0.1);
  LeaderScript& s = c.script;
  s.tremor = TremorSpec::physiological(trial_seed);
  s.waypoints.clear();
  s.waypoints.push_back({0.0, {p0, q}, Interpolation::kLinear});
  const double stroke = c.duration / static_cast<double>(depth.size());
  for (std::size_t j = 0; j < depth.size(); ++j) {
    const double t0 = static_cast<double>(j) * stroke;
    const double jitter = 0.0005 * (2.0 * uniform(trial_seed, j) - 1.0);
    const double lateral = 0.001 * (2.0 * uniform(trial_seed, 100 + j) - 1.0);
    const Vec3 deep = p0 + press * ((layout.start_gap + depth[j] + jitter) / gain);
    const Vec3 shifted = deep + side * (lateral / gain);
    s.waypoints.push_back({t0 + 0.10 * stroke, {p0, q}, Interpolation::kLinear});
    s.waypoints.push_back({t0 + 0.55 * stroke, {deep, q}, Interpolation::kLinear});
    s.waypoints.push_back({t0 + 0.70 * stroke, {shifted, q}, Interpolation::kLinear});
    s.waypoints.push_back({t0 + 0.95 * stroke, {p0, q}, Interpolation::kLinear});
  }
  return c;
}

ExperimentConfig dental_experiment(ScenarioId scenario, std::uint64_t seed,
                                   const DentalLayout& layout) {
  ExperimentConfig e;
  e.name = std::string("dental-") + to_string(scenario);
  for (int target = 0; target < static_cast<int>(layout.targets.size()); ++target) {
    for (int trial = 0; trial < layout.trials_per_sphere; ++trial) {
      e.trials.push_back(dental_trial(scenario, layout, target, trial, seed));
    }
  }
  return e;
}

ScenarioConfig free_space_scenario(ScenarioId scenario, std::uint64_t seed, double duration) {
  ScenarioConfig c;
  c.name = std::string("free-space-") + to_string(scenario);
  c.scenario = scenario;
  c.duration = duration;
  c.seed = seed;
  if (scenario == ScenarioId::kA) c.pipeline.interaction.safety.force_scaling_gain = 0.0;
  c.world.follower.pose.position = Vec3(0.4, 0.0, 0.3);
  c.world.sensor_seed = splitmix64(seed ^ 0x5e45);
  const UnitQuaternion q;
  LeaderScript& s = c.script;
  s.tremor = TremorSpec::physiological(seed);
  s.waypoints = {
      {0.0, {Vec3::Zero(), q}, Interpolation::kLinear},
      {0.25 * duration, {Vec3(0.04, 0.0, 0.0), q}, Interpolation::kLinear},
      {0.50 * duration, {Vec3(0.04, 0.04, 0.0), q}, Interpolation::kLinear},
      {0.75 * duration, {Vec3(0.0, 0.04, 0.02), q}, Interpolation::kLinear},
      {duration, {Vec3::Zero(), q}, Interpolation::kHold},
  };
  return c;
}

std::vector<std::string> preset_names() {
  return {"dental-A", "dental-B", "free-space-A", "free-space-B", "eyehand"};
}

nlohmann::json preset_json(const std::string& name, std::uint64_t seed) {
  if (name == "dental-A") return to_json(dental_experiment(ScenarioId::kA, seed));
  if (name == "dental-B") return to_json(dental_experiment(ScenarioId::kB, seed));
  if (name == "free-space-A") return to_json(free_space_scenario(ScenarioId::kA, seed));
  if (name == "free-space-B") return to_json(free_space_scenario(ScenarioId::kB, seed));
  if (name == "eyehand") {
    EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
    c.tremor.seed = seed;
    return to_json(c);
  }
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace teleop
