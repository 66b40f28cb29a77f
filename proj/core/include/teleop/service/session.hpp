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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "teleop/scenario.hpp"
#include "teleop/service/protocol.hpp"
#include "teleop/sim_world.hpp"

namespace teleop::service {

struct ServiceOptions {
  /// One state frame every n ticks; 3 gives ~41.7 Hz at 125 Hz.
  std::size_t state_decimation = 3;
  std::size_t feedback_decimation = 1;
  std::size_t stats_period = 125;  // ticks
  std::size_t queue_capacity = 512;
};

struct SessionConfig {
  std::string name = "session";
  std::uint64_t seed = 0;
  PipelineParams pipeline;
  WorldConfig world;
  ServiceOptions service;

  /// Free-space world, follower at (0.4, 0, 0.3) with identity orientation.
  SessionConfig();
};

/// Accepts a scenario file ("script" and "duration" are ignored) plus an
/// optional "service" block.
SessionConfig parse_session_config(const nlohmann::json& j);
nlohmann::json to_json(const SessionConfig& cfg);

/**
 * Bounded outbound frame queue shared by the control loop (producer) and
 * the transport (consumer). When full, the oldest droppable frame (state,
 * feedback, stats) is discarded; engagement, safety and error frames are
 * never discarded and may grow the queue past its capacity.
 */
class OutboundQueue {
 public:
  explicit OutboundQueue(std::size_t capacity);

  void push(OutboundMsg msg);
  std::optional<OutboundMsg> try_pop();
  /// Waits up to `timeout` for a frame.
  std::optional<OutboundMsg> pop_for(std::chrono::milliseconds timeout);
  std::vector<OutboundMsg> drain();

  std::size_t size() const;
  std::size_t dropped() const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<OutboundMsg> frames_;
  std::size_t dropped_ = 0;
};

/// Inbound frames applied at one tick, as received (raw text).
struct TickInputs {
  std::uint64_t tick = 0;
  std::vector<std::string> messages;
};

/**
 * Single-threaded session core. Each tick applies the inbound frames
 * received since the previous tick in arrival order, then runs one
 * pipeline cycle with the most recent stylus pose (held between arrivals).
 * Deterministic in the sequence of per-tick inputs.
 */
class Session {
 public:
  explicit Session(const SessionConfig& cfg);

  struct TickResult {
    LogRecord record;
    std::vector<OutboundMsg> frames;
  };

  TickResult tick(const std::vector<std::string>& inbound);

  /// Informational; reported in state frames.
  void set_degraded(bool degraded) { degraded_ = degraded; }
  bool degraded() const { return degraded_; }

  std::uint64_t tick_index() const { return pipeline_.tick_index(); }
  const TeleopPipeline& pipeline() const { return pipeline_; }
  const SessionConfig& config() const { return cfg_; }
  bool foot_pedal() const { return foot_pedal_; }

 private:
  void apply(const InboundMsg& msg);
  OutboundMsg frame(OutboundKind kind, nlohmann::json payload);
  nlohmann::json state_payload(const LogRecord& rec) const;
  nlohmann::json stats_payload() const;

  SessionConfig cfg_;
  TeleopPipeline pipeline_;
  std::optional<Pose> latest_stylus_;
  bool foot_pedal_ = false;
  bool degraded_ = false;
  std::uint64_t seq_ = 0;

  EngagementState last_engagement_ = EngagementState::kIdle;
  bool last_aligned_ = false;
  SafetyEvents last_events_;

  struct Counters {
    std::uint64_t engaged = 0;
    std::uint64_t stale = 0;
    std::uint64_t clamped = 0;
    std::uint64_t emergency = 0;
    std::uint64_t errors = 0;
    double force_sum = 0.0;
    double force_max = 0.0;
  } counters_;
};

/// Per-tick inputs of a recorded session; ticks without frames are omitted.
struct SessionRecording {
  std::uint64_t tick_count = 0;
  std::vector<TickInputs> inputs;
};

void write_recording(const std::filesystem::path& file, const SessionRecording& rec);
SessionRecording read_recording(const std::filesystem::path& file);

/// Replays a recording through a fresh Session.
std::vector<LogRecord> replay_recording(const SessionConfig& cfg, const SessionRecording& rec);

/// The stylus and engagement part of a recording as the offline harness
/// input: the latest pose is held from tick to tick, the first
/// engage_request sets the engagement tick. Other kinds are ignored.
PoseStream pose_stream_from_recording(const SessionRecording& rec);

struct RunnerOptions {
  /// Directory for inputs.jsonl, log.jsonl and session.json; empty: none.
  std::filesystem::path record_dir;
  /// Stop after this many ticks (0: run until stop()).
  std::uint64_t max_ticks = 0;
};

struct RunnerReport {
  std::uint64_t ticks = 0;
  std::uint64_t overruns = 0;  // ticks that started after their deadline
  std::size_t dropped_frames = 0;
  bool degraded = false;
};

/**
 * Fixed-rate control loop on a steady clock. Transport threads post raw
 * inbound frames and consume the outbound queue; the loop owns the
 * session and never waits on the transport.
 */
class SessionRunner {
 public:
  SessionRunner(const SessionConfig& cfg, RunnerOptions options);
  ~SessionRunner();

  SessionRunner(const SessionRunner&) = delete;
  SessionRunner& operator=(const SessionRunner&) = delete;

  /// Thread-safe. Frames posted before a tick's deadline are applied at
  /// that tick.
  void post(std::string raw);
  OutboundQueue& outbound() { return outbound_; }
  /// Called from the control thread after a tick produced frames.
  void set_on_frames(std::function<void()> callback);
  void set_transport_connected(bool connected);

  void start();
  /// Stops the loop, joins it and writes the recording. Idempotent.
  RunnerReport stop();
  /// Blocks until max_ticks were run (or stop() was called).
  RunnerReport wait();
  bool running() const { return running_; }

  /// Valid after stop().
  const std::vector<LogRecord>& log() const { return log_; }
  const SessionRecording& recording() const { return recording_; }

 private:
  void loop();
  void finish();

  SessionConfig cfg_;
  RunnerOptions options_;
  Session session_;
  OutboundQueue outbound_;

  std::mutex inbox_mu_;
  std::vector<std::string> inbox_;

  std::mutex cb_mu_;
  std::function<void()> on_frames_;

  std::atomic<bool> stop_requested_{false};
  std::atomic<bool> running_{false};
  std::atomic<bool> degraded_{false};
  std::thread thread_;
  std::mutex finish_mu_;
  bool finished_ = false;

  std::vector<LogRecord> log_;
  SessionRecording recording_;
  RunnerReport report_;
};

}  // namespace teleop::service
