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

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace teleopctl;
  CLI::App app{"teleopctl: teleoperation simulator, statistics and live session server"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario or experiment and write JSONL logs");
  run_cmd->add_option("--config", run.config, "Scenario or experiment JSON")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Compare scenario A and B logs");
  stats_cmd->add_option("--logs", [&](const CLI::results_t& r) {
    stats.logs_a = r.at(0);
    stats.logs_b = r.at(1);
    return true;
  }, "Scenario A and B logs (file or directory)")->expected(2)->required();
  stats_cmd->add_option("--bmin", stats.b_min, "Lowest bin edge, m")->capture_default_str();
  stats_cmd->add_option("--bmax", stats.b_max, "Highest bin edge, m")->capture_default_str();
  stats_cmd->add_option("--bstep", stats.b_step, "Bin width, m")->capture_default_str();
  stats_cmd->add_option("--min-count", stats.min_count, "Records per bin to use it")
      ->capture_default_str();
  stats_cmd->add_option("--out", stats.out, "Write report.json and bins.csv here");
  stats_cmd->add_flag("--check", stats.check,
                      "Exit 3 unless B dominates A, t < 0, p < alpha and d < max-d");
  stats_cmd->add_option("--alpha", stats.alpha)->capture_default_str();
  stats_cmd->add_option("--max-d", stats.max_d)->capture_default_str();

  EyehandArgs eyehand;
  auto* eh_cmd = app.add_subcommand("eyehand", "Run the eye-hand coordination assessment");
  eh_cmd->add_option_function<std::string>("--config", [&](const std::string& s) {
    eyehand.config = s;
  }, "Assessment JSON (defaults when omitted)");
  eh_cmd->add_option("--out", eyehand.out, "Write report.json and log.jsonl here");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run a live session over WebSocket");
  serve_cmd->add_option("--config", serve.config, "Session JSON")->required();
  serve_cmd->add_option("--port", serve.port, "TCP port (0 picks one)")->capture_default_str();
  serve_cmd->add_option("--address", serve.address)->capture_default_str();
  serve_cmd->add_option("--record", serve.record, "Record inputs and log to this directory");
  serve_cmd->add_option("--duration", serve.duration, "Stop after this many seconds of control");

  PresetArgs preset;
  auto* preset_cmd = app.add_subcommand("preset", "Print a built-in configuration");
  preset_cmd->add_option("name", preset.name,
                         "dental-A, dental-B, free-space-A, free-space-B, eyehand")
      ->required();
  preset_cmd->add_option("--seed", preset.seed)->capture_default_str();
  preset_cmd->add_option("--out", preset.out, "Write to a file instead of stdout");

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a recorded session offline");
  replay_cmd->add_option("--record", replay.record, "Directory written by serve --record")
      ->required();
  replay_cmd->add_option("--out", replay.out, "Output log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (run_cmd->parsed()) return run_command(run);
  if (stats_cmd->parsed()) return stats_command(stats);
  if (eh_cmd->parsed()) return eyehand_command(eyehand);
  if (serve_cmd->parsed()) return serve_command(serve);
  if (preset_cmd->parsed()) return preset_command(preset);
  if (replay_cmd->parsed()) return replay_command(replay);
  return kFailure;
}
