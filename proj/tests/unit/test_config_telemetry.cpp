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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "teleop/config.hpp"
#include "teleop/presets.hpp"
#include "teleop/scenario.hpp"
#include "teleop/telemetry.hpp"

namespace teleop {
namespace {

using nlohmann::json;

// Expects a ConfigError whose path equals `path`.
template <typename F>
void expect_config_error(F&& f, const std::string& path) {
  try {
    f();
    ADD_FAILURE() << "no ConfigError, expected one at " << path;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), path) << e.what();
  }
}

TEST(ConfigReaders, Vectors) {
  EXPECT_EQ(parse_vec3(json::array({1, 2, 3}), "/v"), Vec3(1, 2, 3));
  expect_config_error([] { parse_vec3(json::array({1, 2}), "/v"); }, "/v");
  expect_config_error([] { parse_vec3(json::array({1, "x", 3}), "/v"); }, "/v/1");
  expect_config_error([] { parse_vec3(json::array({1, 2, NAN}), "/v"); }, "/v/2");
  EXPECT_EQ(parse_vec6(json::array({1, 2, 3, 4, 5, 6}), "/v")(5), 6.0);
}

TEST(ConfigReaders, QuaternionIsNormalized) {
  const UnitQuaternion q = parse_quaternion(json::array({2, 0, 0, 0}), "/q");
  EXPECT_EQ(q.w(), 1.0);
  expect_config_error([] { parse_quaternion(json::array({0, 0, 0, 0}), "/q"); }, "/q");
}

TEST(ConfigReaders, Pose) {
  const Pose p = parse_pose(json{{"position", {0.1, 0.2, 0.3}}, {"orientation", {1, 0, 0, 0}}}, "/p");
  EXPECT_EQ(p.position, Vec3(0.1, 0.2, 0.3));
}

TEST(ConfigReaders, SurfaceTypes) {
  const ContactSurface s = parse_surface(
      json{{"type", "sphere"}, {"center", {0.4, 0, 0}}, {"radius", 0.006}, {"stiffness", 2000}}, "/s");
  ASSERT_TRUE(std::holds_alternative<Sphere>(s.geometry));
  EXPECT_EQ(std::get<Sphere>(s.geometry).radius, 0.006);
  expect_config_error([] { parse_surface(json{{"type", "cube"}}, "/s"); }, "/s/type");
  expect_config_error(
      [] { parse_surface(json{{"type", "sphere"}, {"center", {0, 0, 0}}, {"radius", -1.0}}, "/s"); }, "/s/radius");
}

TEST(ScenarioConfig, DefaultsAndTickCount) {
  const ScenarioConfig c = parse_scenario_config(preset_json("free-space-B"));
  EXPECT_EQ(c.scenario, ScenarioId::kB);
  EXPECT_EQ(c.tick_count(), 1250u);
}

TEST(ScenarioConfig, JsonRoundTrip) {
  for (const std::string& name : {"free-space-A", "free-space-B"}) {
    const json j = preset_json(name, 3);
    const ScenarioConfig c = parse_scenario_config(j);
    EXPECT_EQ(to_json(c), j) << name;
    EXPECT_EQ(to_json(parse_scenario_config(to_json(c))), to_json(c));
  }
}

TEST(ScenarioConfig, ScenarioAForcesZeroGain) {
  json j = preset_json("free-space-B");
  j["scenario"] = "A";
  const ScenarioConfig c = parse_scenario_config(j);
  EXPECT_EQ(c.pipeline.interaction.safety.force_scaling_gain, 0.0);
}

TEST(ScenarioConfig, ScenarioBNeedsAGain) {
  json j = preset_json("free-space-B");
  j["safety"]["force_scaling_gain"] = 0.0;
  expect_config_error([&] { parse_scenario_config(j); }, "/safety/force_scaling_gain");
}

TEST(ScenarioConfig, ErrorPaths) {
  const json base = preset_json("free-space-B");
  json j = base;
  j["ehcc"]["pose_window"] = 0;
  expect_config_error([&] { parse_scenario_config(j); }, "/ehcc/pose_window");
  j = base;
  j["scenario"] = "C";
  expect_config_error([&] { parse_scenario_config(j); }, "/scenario");
  j = base;
  j["safety"]["emergency_release"] = 20.0;
  expect_config_error([&] { parse_scenario_config(j); }, "/safety/emergency_release");
  j = base;
  j["script"]["waypoints"][1]["t"] = 0.0;
  expect_config_error([&] { parse_scenario_config(j); }, "/script/waypoints/1/t");
  j = base;
  j["duration"] = -1.0;
  expect_config_error([&] { parse_scenario_config(j); }, "/duration");
  j = base;
  j["world"]["surfaces"] = json::array({{{"type", "plane"}, {"point", {0, 0, 0}}, {"normal", {0, 0, 0}}}});
  expect_config_error([&] { parse_scenario_config(j); }, "/world/surfaces/0/normal");
}

TEST(ExperimentConfig, TrialsArePatchedOntoBase) {
  json base = preset_json("free-space-B");
  const json j = {{"name", "sweep"},
                  {"base", base},
                  {"trials", json::array({{{"name", "t0"}, {"seed", 5}},
                                          {{"name", "t1"}, {"safety", {{"force_scaling_gain", 0.2}}}}})}};
  const ExperimentConfig e = parse_experiment_config(j);
  ASSERT_EQ(e.trials.size(), 2u);
  EXPECT_EQ(e.name, "sweep");
  EXPECT_EQ(e.trials[0].seed, 5u);
  EXPECT_EQ(e.trials[1].pipeline.interaction.safety.force_scaling_gain, 0.2);
  EXPECT_EQ(e.trials[1].pipeline.interaction.safety.emergency_threshold, 15.0);
}

TEST(ExperimentConfig, SingleScenarioIsOneTrial) {
  EXPECT_EQ(parse_experiment_config(preset_json("free-space-A")).trials.size(), 1u);
}

TEST(ExperimentConfig, BadTrials) {
  expect_config_error([] { parse_experiment_config(json{{"base", json::object()}, {"trials", json::array()}}); },
                      "/trials");
}

TEST(LoadJson, MissingAndMalformedFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "teleop_config_test";
  std::filesystem::create_directories(dir);
  EXPECT_THROW(load_json_file(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_json_file(dir / "bad.json"), ConfigError);
}

LogRecord sample_record() {
  LogRecord r;
  r.tick = 42;
  r.t = 0.336;
  r.a = 1.0 / 3.0;
  r.b = 0.0012345678901234567;
  r.engaged = true;
  r.phi = -1.5707963267948966;
  r.stylus = {{0.1, 0.2, 0.3}, quat_exp({0.1, 0.2, 0.3})};
  r.desired = {{0.4, 0.0, 0.3}, quat_exp({0.0, 0.5, 0.0})};
  r.commanded = {{0.4, 1e-17, 0.3}, UnitQuaternion::identity()};
  r.measured = {{0.39999999999, 0.0, 0.3}, quat_exp({0.0, 0.0, -0.7})};
  r.force = {0.1, -2.0, 3.3};
  r.feedback = {1e-300, 0, -0.5};
  r.tracking_error = {1e-4, 2e-4, -3e-4};
  r.scale_factor = 0.71;
  r.events.deviation_clamped = true;
  return r;
}

TEST(Telemetry, RecordRoundTripIsExact) {
  const LogRecord r = sample_record();
  const LogRecord back = log_record_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(max_field_difference(r, back), 0.0);
  EXPECT_EQ(back.events, r.events);
}

TEST(Telemetry, JsonlStreamRoundTrip) {
  std::vector<LogRecord> log;
  for (int i = 0; i < 10; ++i) {
    LogRecord r = sample_record();
    r.tick = i;
    r.a = i * 0.1;
    log.push_back(r);
  }
  std::stringstream ss;
  write_log_jsonl(ss, log);
  EXPECT_EQ(max_field_difference(read_log_jsonl(ss), log), 0.0);
}

TEST(Telemetry, ReadLogsConcatenatesDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "teleop_telemetry_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<LogRecord> one = {sample_record()};
  std::vector<LogRecord> two = {sample_record(), sample_record()};
  write_log_jsonl(dir / "002-b.jsonl", two);
  write_log_jsonl(dir / "001-a.jsonl", one);
  std::ofstream(dir / "notes.txt") << "ignored";
  EXPECT_EQ(read_logs(dir).size(), 3u);
  EXPECT_EQ(read_logs(dir / "001-a.jsonl").size(), 1u);
}

TEST(Telemetry, MalformedLineReportsLineNumber) {
  std::stringstream ss;
  ss << to_json(sample_record()).dump() << "\n{\"tick\": 1}\n";
  try {
    read_log_jsonl(ss);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path().rfind("line 2", 0), 0u) << e.path();
  }
}

TEST(Telemetry, FieldDifference) {
  const LogRecord a = sample_record();
  LogRecord b = a;
  b.feedback.y() += 1e-9;
  EXPECT_NEAR(max_field_difference(a, b), 1e-9, 1e-20);
  b = a;
  b.events.emergency_active = true;
  EXPECT_TRUE(std::isinf(max_field_difference(a, b)));
  b = a;
  b.tick += 1;
  EXPECT_TRUE(std::isinf(max_field_difference(a, b)));
  EXPECT_TRUE(std::isinf(max_field_difference(std::vector<LogRecord>{a}, std::vector<LogRecord>{})));
}

}  // namespace
}  // namespace teleop
