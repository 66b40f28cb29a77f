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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teleop/config.hpp"
#include "teleop/sim_world.hpp"
#include "teleop/stats.hpp"

namespace teleop {

/// A: limiter disabled (gain forced to 0). B: limiter enabled (gain > 0).
enum class ScenarioId { kA, kB };

const char* to_string(ScenarioId id);

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioId scenario = ScenarioId::kB;
  double duration = 20.0;  // s
  std::uint64_t seed = 0;
  PipelineParams pipeline;
  WorldConfig world;
  LeaderScript script;

  ScenarioConfig();
  /// Number of control ticks: round(duration / T_s).
  std::size_t tick_count() const;
};

/// Parses and validates a scenario object. Scenario A forces the limiter
/// gain to 0; scenario B requires it to be > 0.
ScenarioConfig parse_scenario_config(const nlohmann::json& j, const std::string& path = "");
nlohmann::json to_json(const ScenarioConfig& cfg);

/// A list of trials. The file holds either one scenario object or
/// {"name": ..., "base": {...}, "trials": [{...}, ...]} where each trial is
/// merge-patched onto "base".
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<ScenarioConfig> trials;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
/// Reads a JSON file; parse errors become ConfigError.
nlohmann::json load_json_file(const std::filesystem::path& file);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Engages at tick 0 (with the configured hold) and records every tick.
std::vector<LogRecord> run_scenario(const ScenarioConfig& cfg);

/// Per-tick stylus input; nullopt is a tick without a fresh pose.
struct PoseStream {
  std::vector<std::optional<Pose>> stylus;
  std::uint64_t engage_request_tick = 0;
};

/// Drives a fresh pipeline with a recorded or scripted input stream.
std::vector<LogRecord> run_pose_stream(const PipelineParams& params, const WorldConfig& world,
                                       const PoseStream& stream);

struct ComparisonOptions {
  double b_min = 0.0;
  double b_max = 0.007;
  double b_step = 0.0001;
  std::size_t min_count = 30;
};

/**
 * Scenario A vs B on the force-vs-penetration relation. The samples for the
 * two-sample tests are the per-bin conditional mean forces over the bins
 * holding at least min_count records in both scenarios; the tests compare
 * B against A (negative t and d: lower force with the limiter).
 */
struct ComparisonReport {
  ComparisonOptions options;
  BinStats bins_a;
  BinStats bins_b;
  std::vector<std::size_t> used_bins;
  std::vector<double> means_a;
  std::vector<double> means_b;
  std::optional<WelchResult> welch;
  std::optional<CohensD> cohen;
  std::optional<LeveneResult> levene;
  std::string test_error;  // set when a test was degenerate
  /// Bins where the B mean exceeds the A mean.
  std::vector<std::size_t> dominance_violations;
  std::size_t records_a = 0;
  std::size_t records_b = 0;

  bool dominance() const { return !used_bins.empty() && dominance_violations.empty(); }
};

ComparisonReport compare_scenarios(const std::vector<LogRecord>& a, const std::vector<LogRecord>& b,
                                   const ComparisonOptions& options = {});
nlohmann::json to_json(const ComparisonReport& r);
/// One row per bin: lower, upper, center, count/mean/variance for A and B.
std::string bins_csv(const ComparisonReport& r);

}  // namespace teleop
