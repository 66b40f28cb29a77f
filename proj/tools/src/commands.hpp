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

namespace teleopctl {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kAssertionFailed = 3;

struct RunArgs {
  std::filesystem::path config;
  std::filesystem::path out;
};

struct StatsArgs {
  std::filesystem::path logs_a;
  std::filesystem::path logs_b;
  double b_min = 0.0;
  double b_max = 0.007;
  double b_step = 0.0001;
  std::size_t min_count = 30;
  std::filesystem::path out;  // report.json + bins.csv; empty: stdout only
  bool check = false;         // exit 3 unless B is lower than A
  double alpha = 0.01;
  double max_d = -0.2;
};

struct EyehandArgs {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
};

struct ServeArgs {
  std::filesystem::path config;
  std::uint16_t port = 8765;
  std::string address = "127.0.0.1";
  std::filesystem::path record;
  double duration = 0.0;  // s; 0 runs until interrupted
};

struct PresetArgs {
  std::string name;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct ReplayArgs {
  std::filesystem::path record;  // directory written by serve --record
  std::filesystem::path out;
};

int run_command(const RunArgs& args);
int stats_command(const StatsArgs& args);
int eyehand_command(const EyehandArgs& args);
int serve_command(const ServeArgs& args);
int preset_command(const PresetArgs& args);
int replay_command(const ReplayArgs& args);

}  // namespace teleopctl
