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


// Cockpit round trip over a real WebSocket: a synthetic client plays the
// operator in real time against the fixed-rate control loop.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "support/session_script.hpp"
#include "support/ws_client.hpp"
#include "teleop/net/websocket_server.hpp"
#include "teleop/telemetry.hpp"

namespace teleop {
namespace {

using service::OutboundKind;
using service::OutboundMsg;
using Clock = std::chrono::steady_clock;

// Sends the frames of tick k at start + k * period, until the runner stops.
void play(testing::WsClient& client, const service::SessionRecording& rec,
          const service::SessionRunner& runner, double period) {
  const auto start = Clock::now();
  for (const service::TickInputs& in : rec.inputs) {
    std::this_thread::sleep_until(
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(period * static_cast<double>(in.tick))));
    if (!runner.running()) return;
    for (const std::string& m : in.messages) client.send(m);
  }
}

// Waits until the server queue is empty and no frame arrived for 300 ms.
void wait_flushed(service::SessionRunner& runner, const testing::WsClient& client) {
  std::size_t last = client.frame_count();
  auto quiet_since = Clock::now();
  const auto deadline = Clock::now() + std::chrono::seconds(20);
  while (Clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    const std::size_t n = client.frame_count();
    if (n != last) {
      last = n;
      quiet_since = Clock::now();
    } else if (runner.outbound().size() == 0 &&
               Clock::now() - quiet_since > std::chrono::milliseconds(300)) {
      return;
    }
  }
}

struct Parsed {
  OutboundMsg msg;
  Clock::time_point arrival;
};

std::vector<Parsed> parse_all(const testing::WsClient& client) {
  std::vector<Parsed> out;
  for (const testing::ReceivedFrame& f : client.frames()) {
    out.push_back({service::parse_outbound(f.text), f.arrival});
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(CockpitRoundTrip, TenSecondsMatchOfflineHarness) {
  service::SessionConfig cfg;
  cfg.world.surfaces.push_back({Sphere{Vec3(0.4, 0.012, 0.28), 0.015}, 3000.0, 0.0});
  cfg.world.sensor_noise_std = 0.02;
  cfg.world.sensor_seed = 11;
  const auto dir = scratch("teleop_cockpit_roundtrip");

  service::SessionRunner runner(cfg, {dir, 1250});  // 10 s
  net::WebSocketServer server(runner, 0, "127.0.0.1", {[&runner] { runner.start(); }, {}});
  server.start();

  testing::WsClient client;
  client.connect("127.0.0.1", server.port());
  testing::OperatorScript script;
  script.ticks = 1250;
  play(client, testing::scripted_inputs(cfg, script), runner, cfg.pipeline.ehcc.control_period);
  const service::RunnerReport report = runner.wait();
  wait_flushed(runner, client);
  server.stop();
  client.close();
  runner.stop();

  EXPECT_EQ(report.ticks, 1250u);
  ASSERT_TRUE(runner.log().back().engaged);

  // The recorded log against the offline harness fed with the recorded input.
  const std::vector<LogRecord> served = read_logs(dir / "log.jsonl");
  const service::SessionRecording rec = service::read_recording(dir / "inputs.jsonl");
  const std::vector<LogRecord> offline =
      run_pose_stream(cfg.pipeline, cfg.world, service::pose_stream_from_recording(rec));
  ASSERT_EQ(served.size(), offline.size());
  EXPECT_LE(max_field_difference(served, offline), 1e-12);
  EXPECT_EQ(max_field_difference(served, service::replay_recording(cfg, rec)), 0.0);

  const std::vector<Parsed> frames = parse_all(client);
  ASSERT_FALSE(frames.empty());
  for (std::size_t i = 1; i < frames.size(); ++i) {
    ASSERT_GT(frames[i].msg.seq, frames[i - 1].msg.seq);
  }
  std::vector<Clock::time_point> states;
  for (const Parsed& p : frames) {
    EXPECT_NE(p.msg.kind, OutboundKind::kError) << p.msg.payload.dump();
    if (p.msg.kind == OutboundKind::kState) states.push_back(p.arrival);
  }
  ASSERT_GT(states.size(), 2u);
  const double span = std::chrono::duration<double>(states.back() - states.front()).count();
  const double rate = static_cast<double>(states.size() - 1) / span;
  EXPECT_GE(rate, 30.0) << states.size() << " state frames over " << span << " s";
  RecordProperty("state_rate_hz", std::to_string(rate));
  std::filesystem::remove_all(dir);
}

TEST(CockpitRoundTrip, SafetyFramesSurviveBackpressure) {
  service::SessionConfig cfg;
  cfg.service.queue_capacity = 16;
  cfg.service.state_decimation = 1;
  testing::OperatorScript script;
  script.ticks = 700;
  script.radius = 0.0;
  script.push = Vec3(0.0, 0.0, -0.03);
  const service::SessionRecording inputs = testing::scripted_inputs(cfg, script);

  // Place a stiff plane across the path the push takes in free space, with
  // a low emergency threshold so the latch toggles.
  const std::vector<LogRecord> probe = service::replay_recording(cfg, inputs);
  const Vec3 start = probe[150].measured.position;
  const Vec3 travel = probe.back().measured.position - start;
  ASSERT_GT(travel.norm(), 0.005);
  cfg.world.surfaces.push_back({Plane{start + 0.3 * travel, -travel.normalized()}, 5000.0, 0.0});
  cfg.pipeline.interaction.safety = SafetyConfig::with_threshold(2.0);

  service::SessionRunner runner(cfg, {{}, script.ticks});
  net::WebSocketServer server(runner, 0, "127.0.0.1", {[&runner] { runner.start(); }, {}});
  server.start();
  testing::WsClient client(4096);
  client.connect("127.0.0.1", server.port());
  client.set_paused(true);
  play(client, inputs, runner, cfg.pipeline.ehcc.control_period);
  const service::RunnerReport report = runner.wait();
  client.set_paused(false);
  wait_flushed(runner, client);
  server.stop();
  client.close();

  // Safety frames expected from the flag edges of the control log.
  std::vector<std::uint64_t> edges;
  SafetyEvents prev;
  for (const LogRecord& r : runner.log()) {
    if (!(r.events == prev)) edges.push_back(r.tick);
    prev = r.events;
  }
  ASSERT_GE(edges.size(), 2u);
  ASSERT_TRUE(std::any_of(runner.log().begin(), runner.log().end(),
                          [](const LogRecord& r) { return r.events.emergency_active; }));

  std::vector<std::uint64_t> received;
  std::size_t states = 0;
  for (const Parsed& p : parse_all(client)) {
    if (p.msg.kind == OutboundKind::kSafetyEvent) received.push_back(p.msg.tick);
    if (p.msg.kind == OutboundKind::kState) ++states;
  }
  EXPECT_GT(report.dropped_frames, 0u) << "no backpressure was generated";
  EXPECT_LT(states, script.ticks);
  EXPECT_EQ(received, edges);
}

}  // namespace
}  // namespace teleop
