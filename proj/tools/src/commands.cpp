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

#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "teleop/config.hpp"
#include "teleop/eyehand_assessment.hpp"
#include "teleop/presets.hpp"
#include "teleop/scenario.hpp"
#include "teleop/service/session.hpp"
#include "teleop/telemetry.hpp"
#ifdef TELEOP_HAVE_NET
#include "teleop/net/websocket_server.hpp"
#endif

namespace teleopctl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ConfigError messages already lead with the JSON pointer.
int config_error(const std::exception& e) {
  std::cerr << "config error: " << e.what() << '\n';
  return kConfigError;
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream os(file);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + file.string());
}

std::string trial_file(std::size_t index, const std::string& name) {
  std::ostringstream os;
  os << std::setw(3) << std::setfill('0') << index << '-';
  for (char c : name) os << (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
  os << ".jsonl";
  return os.str();
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

}  // namespace

int run_command(const RunArgs& args) {
  teleop::ExperimentConfig exp;
  try {
    exp = teleop::parse_experiment_config(teleop::load_json_file(args.config));
  } catch (const teleop::ConfigError& e) {
    return config_error(e);
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  }
  try {
    fs::create_directories(args.out);
    json summary = {{"name", exp.name}, {"trials", json::array()}};
    for (std::size_t i = 0; i < exp.trials.size(); ++i) {
      const teleop::ScenarioConfig& trial = exp.trials[i];
      const std::vector<teleop::LogRecord> log = teleop::run_scenario(trial);
      const std::string file = trial_file(i, trial.name);
      teleop::write_log_jsonl(args.out / file, log);
      std::size_t engaged = 0;
      std::size_t emergency = 0;
      double max_force = 0.0;
      for (const teleop::LogRecord& r : log) {
        engaged += r.engaged;
        emergency += r.events.emergency_active;
        max_force = std::max(max_force, r.a);
      }
      summary["trials"].push_back({{"name", trial.name},
                                   {"scenario", teleop::to_string(trial.scenario)},
                                   {"log", file},
                                   {"ticks", log.size()},
                                   {"engaged_ticks", engaged},
                                   {"emergency_ticks", emergency},
                                   {"max_force", max_force}});
    }
    write_text(args.out / "config.json", teleop::to_json(exp).dump(2) + "\n");
    write_text(args.out / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

int stats_command(const StatsArgs& args) {
  if (!(args.b_step > 0.0) || !(args.b_max > args.b_min)) {
    std::cerr << "config error: need bstep > 0 and bmax > bmin\n";
    return kConfigError;
  }
  std::vector<teleop::LogRecord> a;
  std::vector<teleop::LogRecord> b;
  try {
    a = teleop::read_logs(args.logs_a);
    b = teleop::read_logs(args.logs_b);
  } catch (const std::exception& e) {
    return config_error(e);
  }
  teleop::ComparisonOptions opt;
  opt.b_min = args.b_min;
  opt.b_max = args.b_max;
  opt.b_step = args.b_step;
  opt.min_count = args.min_count;
  const teleop::ComparisonReport report = teleop::compare_scenarios(a, b, opt);
  json j = teleop::to_json(report);

  std::vector<std::string> failures;
  if (!report.dominance()) failures.push_back("per-bin dominance of A over B");
  if (!report.welch || !(report.welch->t < 0.0) || !(report.welch->p < args.alpha)) {
    failures.push_back("Welch t < 0 with p < alpha");
  }
  if (!report.cohen || !(report.cohen->d < args.max_d)) failures.push_back("Cohen's d < max-d");
  j["check"] = {{"alpha", args.alpha}, {"max_d", args.max_d}, {"pass", failures.empty()},
                {"failures", failures}};

  try {
    if (!args.out.empty()) {
      write_text(args.out / "report.json", j.dump(2) + "\n");
      write_text(args.out / "bins.csv", teleop::bins_csv(report));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  std::cout << j.dump(2) << '\n';
  if (args.check && !failures.empty()) {
    for (const std::string& f : failures) std::cerr << "check failed: " << f << '\n';
    return kAssertionFailed;
  }
  return kOk;
}

int eyehand_command(const EyehandArgs& args) {
  teleop::EyeHandAssessmentConfig cfg = teleop::EyeHandAssessmentConfig::defaults();
  try {
    if (args.config) cfg = teleop::parse_eyehand_config(teleop::load_json_file(*args.config));
  } catch (const teleop::ConfigError& e) {
    return config_error(e);
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  }
  teleop::EyeHandReport report;
  try {
    report = teleop::run_eyehand_assessment(cfg);
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  }
  const json j = teleop::to_json(report);
  try {
    if (!args.out.empty()) {
      write_text(args.out / "report.json", j.dump(2) + "\n");
      teleop::write_log_jsonl(args.out / "log.jsonl", report.log);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  std::cout << j.dump(2) << '\n';
  if (!report.pass) {
    for (const std::string& f : report.failures) std::cerr << "assessment failed: " << f << '\n';
    return kAssertionFailed;
  }
  return kOk;
}

int serve_command(const ServeArgs& args) {
#ifdef TELEOP_HAVE_NET
  teleop::service::SessionConfig cfg;
  try {
    cfg = teleop::service::parse_session_config(teleop::load_json_file(args.config));
  } catch (const teleop::ConfigError& e) {
    return config_error(e);
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  }
  try {
    teleop::service::RunnerOptions opt;
    opt.record_dir = args.record;
    if (args.duration > 0.0) {
      opt.max_ticks = static_cast<std::uint64_t>(
          std::llround(args.duration / cfg.pipeline.ehcc.control_period));
    }
    teleop::service::SessionRunner runner(cfg, opt);
    // The control clock starts with the first client.
    teleop::net::WebSocketServer server(
        runner, args.port, args.address,
        {[&] { runner.start(); }, [] { std::cerr << "client disconnected\n"; }});
    server.start();
    std::cout << json{{"listening", args.address}, {"port", server.port()}}.dump() << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    bool started = false;
    while (!g_interrupted) {
      started = started || runner.running();
      if (started && !runner.running()) break;  // max_ticks reached
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    const teleop::service::RunnerReport report = runner.stop();
    // Give the writer a moment to flush the last frames.
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    std::cout << json{{"ticks", report.ticks},
                      {"overruns", report.overruns},
                      {"dropped_frames", report.dropped_frames},
                      {"degraded", report.degraded}}
                     .dump()
              << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
#else
  (void)args;
  std::cerr << "built without the WebSocket transport\n";
  return kFailure;
#endif
}

int preset_command(const PresetArgs& args) {
  json j;
  try {
    j = teleop::preset_json(args.name, args.seed);
  } catch (const std::invalid_argument& e) {
    return config_error(e);
  }
  if (args.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  try {
    write_text(args.out, j.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

int replay_command(const ReplayArgs& args) {
  teleop::service::SessionConfig cfg;
  teleop::service::SessionRecording rec;
  try {
    cfg = teleop::service::parse_session_config(
        teleop::load_json_file(args.record / "session.json"));
    rec = teleop::service::read_recording(args.record / "inputs.jsonl");
  } catch (const std::exception& e) {
    return config_error(e);
  }
  try {
    const std::vector<teleop::LogRecord> log = teleop::service::replay_recording(cfg, rec);
    teleop::write_log_jsonl(args.out, log);
    const fs::path live = args.record / "log.jsonl";
    if (fs::exists(live)) {
      const double diff = teleop::max_field_difference(teleop::read_logs(live), log);
      std::cout << json{{"ticks", log.size()}, {"max_field_difference", diff}}.dump() << '\n';
      if (!(diff <= 1e-12)) return kAssertionFailed;
    } else {
      std::cout << json{{"ticks", log.size()}}.dump() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace teleopctl
