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

#include "teleop/service/session.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "teleop/config.hpp"
#include "teleop/telemetry.hpp"

namespace teleop::service {

using nlohmann::json;

namespace {

json events_json(const SafetyEvents& e) {
  return {{"stale", e.stale_reference},
          {"clamped", e.deviation_clamped},
          {"emergency", e.emergency_active}};
}

double finite_number(const json& v, const std::string& name) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw ProtocolError("invalid_param", name + " must be a finite number");
  }
  return v.get<double>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

SessionConfig::SessionConfig() {
  world.follower.pose.position = Vec3(0.4, 0.0, 0.3);
}

SessionConfig parse_session_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "expected an object");
  json scenario = j;
  scenario.erase("service");
  scenario.erase("duration");
  scenario["script"] = {{"waypoints", json::array({{{"t", 0.0}, {"position", {0, 0, 0}}}})}};
  if (!scenario.contains("world")) {
    scenario["world"] = {{"follower", {{"pose", to_json(SessionConfig().world.follower.pose)}}}};
  }
  const ScenarioConfig sc = parse_scenario_config(scenario);

  SessionConfig c;
  c.name = sc.name;
  c.seed = sc.seed;
  c.pipeline = sc.pipeline;
  c.world = sc.world;
  if (const auto it = j.find("service"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("/service", "expected an object");
    const std::pair<const char*, std::size_t*> fields[] = {
        {"state_decimation", &c.service.state_decimation},
        {"feedback_decimation", &c.service.feedback_decimation},
        {"stats_period", &c.service.stats_period},
        {"queue_capacity", &c.service.queue_capacity}};
    for (const auto& [key, value] : it->items()) {
      bool known = false;
      for (const auto& [name, out] : fields) {
        if (key != name) continue;
        known = true;
        if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
          throw ConfigError("/service/" + key, "expected a positive integer");
        }
        *out = value.get<std::size_t>();
      }
      if (!known) throw ConfigError("/service/" + key, "unknown key");
    }
  }
  return c;
}

json to_json(const SessionConfig& c) {
  ScenarioConfig sc;
  sc.name = c.name;
  sc.seed = c.seed;
  sc.pipeline = c.pipeline;
  sc.world = c.world;
  sc.scenario = c.pipeline.interaction.safety.force_scaling_gain > 0.0 ? ScenarioId::kB
                                                                        : ScenarioId::kA;
  json j = to_json(sc);
  j.erase("script");
  j.erase("duration");
  j["service"] = {{"state_decimation", c.service.state_decimation},
                  {"feedback_decimation", c.service.feedback_decimation},
                  {"stats_period", c.service.stats_period},
                  {"queue_capacity", c.service.queue_capacity}};
  return j;
}

// ---------------------------------------------------------------------------
// Outbound queue

OutboundQueue::OutboundQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

void OutboundQueue::push(OutboundMsg msg) {
  {
    std::lock_guard lock(mu_);
    if (frames_.size() >= capacity_) {
      const auto victim = std::find_if(frames_.begin(), frames_.end(),
                                       [](const OutboundMsg& m) { return m.droppable(); });
      if (victim != frames_.end()) {
        frames_.erase(victim);
        ++dropped_;
      } else if (msg.droppable()) {
        ++dropped_;
        return;
      }
    }
    frames_.push_back(std::move(msg));
  }
  cv_.notify_one();
}

std::optional<OutboundMsg> OutboundQueue::try_pop() {
  std::lock_guard lock(mu_);
  if (frames_.empty()) return std::nullopt;
  OutboundMsg m = std::move(frames_.front());
  frames_.pop_front();
  return m;
}

std::optional<OutboundMsg> OutboundQueue::pop_for(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [&] { return !frames_.empty(); })) return std::nullopt;
  OutboundMsg m = std::move(frames_.front());
  frames_.pop_front();
  return m;
}

std::vector<OutboundMsg> OutboundQueue::drain() {
  std::lock_guard lock(mu_);
  std::vector<OutboundMsg> out(std::make_move_iterator(frames_.begin()),
                               std::make_move_iterator(frames_.end()));
  frames_.clear();
  return out;
}

std::size_t OutboundQueue::size() const {
  std::lock_guard lock(mu_);
  return frames_.size();
}

std::size_t OutboundQueue::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(const SessionConfig& cfg) : cfg_(cfg), pipeline_(cfg.pipeline, cfg.world) {
  if (cfg.service.state_decimation == 0 || cfg.service.feedback_decimation == 0 ||
      cfg.service.stats_period == 0) {
    throw std::invalid_argument("Session: decimations must be positive");
  }
}

OutboundMsg Session::frame(OutboundKind kind, json payload) {
  OutboundMsg m;
  m.kind = kind;
  m.tick = pipeline_.tick_index();
  m.seq = seq_++;
  m.payload = std::move(payload);
  return m;
}

void Session::apply(const InboundMsg& msg) {
  if (const auto* p = std::get_if<StylusPoseMsg>(&msg.body)) {
    latest_stylus_ = p->pose;
  } else if (const auto* e = std::get_if<EngageRequestMsg>(&msg.body)) {
    if (e->engage) {
      pipeline_.request_engagement();
    } else {
      pipeline_.disengage();
    }
  } else if (const auto* t = std::get_if<ToggleLimiterMsg>(&msg.body)) {
    pipeline_.controller().set_limiter_enabled(t->enabled);
  } else if (const auto* f = std::get_if<FootPedalMsg>(&msg.body)) {
    foot_pedal_ = f->pressed;
  } else if (const auto* s = std::get_if<SetParamMsg>(&msg.body)) {
    const std::string& name = s->name;
    try {
      if (name == "scaling") {
        Vec3 g;
        if (s->value.is_array()) {
          g = parse_vec3(s->value, "/value");
        } else {
          g = Vec3::Constant(finite_number(s->value, name));
        }
        pipeline_.ehcc().set_scaling(ScalingMatrix(g));
      } else if (name == "force_scaling_gain" || name == "emergency_threshold" ||
                 name == "emergency_release" || name == "max_translation_deviation" ||
                 name == "max_rotation_deviation") {
        SafetyConfig sc = pipeline_.controller().params().safety;
        const double v = finite_number(s->value, name);
        if (name == "force_scaling_gain") sc.force_scaling_gain = v;
        if (name == "emergency_threshold") sc.emergency_threshold = v;
        if (name == "emergency_release") sc.emergency_release = v;
        if (name == "max_translation_deviation") sc.max_translation_deviation = v;
        if (name == "max_rotation_deviation") sc.max_rotation_deviation = v;
        pipeline_.controller().set_safety(sc);
      } else if (name.rfind("hfc.", 0) == 0) {
        HfcParams hp = pipeline_.hfc().params();
        const std::string field = name.substr(4);
        if (field == "stiffness" || field == "damping") {
          const Vec3 v = s->value.is_array() ? parse_vec3(s->value, "/value")
                                             : Vec3::Constant(finite_number(s->value, name));
          (field == "stiffness" ? hp.stiffness : hp.damping) = v;
        } else if (field == "max_force") {
          hp.max_force = finite_number(s->value, name);
        } else if (field == "dead_band") {
          hp.dead_band = finite_number(s->value, name);
        } else {
          throw ProtocolError("invalid_param", "unknown parameter \"" + name + "\"");
        }
        pipeline_.hfc().set_params(hp);
      } else {
        throw ProtocolError("invalid_param", "unknown parameter \"" + name + "\"");
      }
    } catch (const ProtocolError&) {
      throw;
    } catch (const std::exception& e) {
      throw ProtocolError("invalid_param", name + ": " + e.what());
    }
  }
}

json Session::state_payload(const LogRecord& rec) const {
  json target = nullptr;
  if (const auto t = pipeline_.engagement_target()) {
    target = teleop::to_json(Pose::from_transform(*t));
  }
  const InteractionController& ctl = pipeline_.controller();
  return {{"t", rec.t},
          {"engagement", to_string(pipeline_.engagement())},
          {"aligned", pipeline_.aligned()},
          {"stylus", teleop::to_json(rec.stylus)},
          {"desired", teleop::to_json(rec.desired)},
          {"commanded", teleop::to_json(rec.commanded)},
          {"measured", teleop::to_json(rec.measured)},
          {"engagement_target", target},
          {"phi", rec.phi},
          {"force", teleop::to_json(rec.force)},
          {"a", rec.a},
          {"b", rec.b},
          {"feedback", teleop::to_json(rec.feedback)},
          {"tracking_error", teleop::to_json(rec.tracking_error)},
          {"scale", rec.scale_factor},
          {"limiter_enabled", ctl.limiter_enabled()},
          {"force_scaling_gain", ctl.params().safety.force_scaling_gain},
          {"f_max", pipeline_.hfc().params().max_force},
          {"dead_band", pipeline_.hfc().params().dead_band},
          {"events", events_json(rec.events)},
          {"foot_pedal", foot_pedal_},
          {"degraded", degraded_}};
}

json Session::stats_payload() const {
  const double mean =
      counters_.engaged > 0 ? counters_.force_sum / static_cast<double>(counters_.engaged) : 0.0;
  return {{"ticks", pipeline_.tick_index()},
          {"engaged_ticks", counters_.engaged},
          {"mean_force", mean},
          {"max_force", counters_.force_max},
          {"stale_ticks", counters_.stale},
          {"clamped_ticks", counters_.clamped},
          {"emergency_ticks", counters_.emergency},
          {"rejected_messages", counters_.errors}};
}

Session::TickResult Session::tick(const std::vector<std::string>& inbound) {
  TickResult out;
  for (const std::string& raw : inbound) {
    try {
      apply(parse_inbound(raw));
    } catch (const ProtocolError& e) {
      ++counters_.errors;
      out.frames.push_back(frame(OutboundKind::kError, {{"code", e.code()}, {"message", e.what()}}));
    }
  }

  const std::uint64_t k = pipeline_.tick_index();
  out.record = pipeline_.tick(latest_stylus_);
  const LogRecord& rec = out.record;
  // Frames carry the index of the tick that produced them.
  const auto emit = [&](OutboundKind kind, json payload) {
    OutboundMsg m = frame(kind, std::move(payload));
    m.tick = k;
    out.frames.push_back(std::move(m));
  };

  const bool aligned = pipeline_.aligned();
  if (pipeline_.engagement() != last_engagement_ ||
      (pipeline_.engagement() == EngagementState::kAligning && aligned != last_aligned_)) {
    emit(OutboundKind::kEngagementStatus, {{"state", to_string(pipeline_.engagement())},
                                           {"previous", to_string(last_engagement_)},
                                           {"aligned", aligned}});
    last_engagement_ = pipeline_.engagement();
  }
  last_aligned_ = aligned;

  if (!(rec.events == last_events_)) {
    json changed = json::array();
    if (rec.events.stale_reference != last_events_.stale_reference) changed.push_back("stale");
    if (rec.events.deviation_clamped != last_events_.deviation_clamped) changed.push_back("clamped");
    if (rec.events.emergency_active != last_events_.emergency_active) changed.push_back("emergency");
    json payload = events_json(rec.events);
    payload["changed"] = changed;
    emit(OutboundKind::kSafetyEvent, payload);
    last_events_ = rec.events;
  }

  if (rec.engaged) {
    ++counters_.engaged;
    counters_.force_sum += rec.a;
    counters_.force_max = std::max(counters_.force_max, rec.a);
    counters_.stale += rec.events.stale_reference;
    counters_.clamped += rec.events.deviation_clamped;
    counters_.emergency += rec.events.emergency_active;
  }

  if (k % cfg_.service.state_decimation == 0) emit(OutboundKind::kState, state_payload(rec));
  if (k % cfg_.service.feedback_decimation == 0) {
    emit(OutboundKind::kFeedbackForce, {{"force", teleop::to_json(rec.feedback)}});
  }
  if ((k + 1) % cfg_.service.stats_period == 0) emit(OutboundKind::kStatsSnapshot, stats_payload());
  return out;
}

// ---------------------------------------------------------------------------
// Recording and replay

void write_recording(const std::filesystem::path& file, const SessionRecording& rec) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << json{{"v", kProtocolVersion}, {"tick_count", rec.tick_count}}.dump() << '\n';
  for (const TickInputs& in : rec.inputs) {
    os << json{{"tick", in.tick}, {"messages", in.messages}}.dump() << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + file.string());
}

SessionRecording read_recording(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  SessionRecording rec;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (header) {
        if (j.at("v").get<int>() != kProtocolVersion) {
          throw std::runtime_error("unsupported recording version");
        }
        rec.tick_count = j.at("tick_count").get<std::uint64_t>();
        header = false;
        continue;
      }
      TickInputs in;
      in.tick = j.at("tick").get<std::uint64_t>();
      in.messages = j.at("messages").get<std::vector<std::string>>();
      if (!rec.inputs.empty() && in.tick <= rec.inputs.back().tick) {
        throw std::runtime_error("ticks not increasing");
      }
      rec.inputs.push_back(std::move(in));
    } catch (const std::exception& e) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (header) throw std::runtime_error(file.string() + ": empty recording");
  return rec;
}

std::vector<LogRecord> replay_recording(const SessionConfig& cfg, const SessionRecording& rec) {
  Session session(cfg);
  std::vector<LogRecord> log;
  log.reserve(rec.tick_count);
  std::size_t next = 0;
  const std::vector<std::string> none;
  for (std::uint64_t k = 0; k < rec.tick_count; ++k) {
    const bool has = next < rec.inputs.size() && rec.inputs[next].tick == k;
    log.push_back(session.tick(has ? rec.inputs[next].messages : none).record);
    if (has) ++next;
  }
  return log;
}

PoseStream pose_stream_from_recording(const SessionRecording& rec) {
  PoseStream stream;
  stream.stylus.resize(rec.tick_count);
  stream.engage_request_tick = rec.tick_count;
  std::optional<Pose> latest;
  std::size_t next = 0;
  bool requested = false;
  for (std::uint64_t k = 0; k < rec.tick_count; ++k) {
    if (next < rec.inputs.size() && rec.inputs[next].tick == k) {
      for (const std::string& raw : rec.inputs[next].messages) {
        InboundMsg msg;
        try {
          msg = parse_inbound(raw);
        } catch (const ProtocolError&) {
          continue;
        }
        if (const auto* p = std::get_if<StylusPoseMsg>(&msg.body)) latest = p->pose;
        if (std::holds_alternative<EngageRequestMsg>(msg.body) && !requested) {
          stream.engage_request_tick = k;
          requested = true;
        }
      }
      ++next;
    }
    stream.stylus[k] = latest;
  }
  return stream;
}

// ---------------------------------------------------------------------------
// Runner

SessionRunner::SessionRunner(const SessionConfig& cfg, RunnerOptions options)
    : cfg_(cfg),
      options_(std::move(options)),
      session_(cfg),
      outbound_(cfg.service.queue_capacity) {}

SessionRunner::~SessionRunner() { stop(); }

void SessionRunner::post(std::string raw) {
  std::lock_guard lock(inbox_mu_);
  inbox_.push_back(std::move(raw));
}

void SessionRunner::set_on_frames(std::function<void()> callback) {
  std::lock_guard lock(cb_mu_);
  on_frames_ = std::move(callback);
}

void SessionRunner::set_transport_connected(bool connected) {
  if (!connected && running_) degraded_ = true;
}

void SessionRunner::start() {
  if (running_ || finished_) return;
  running_ = true;
  thread_ = std::thread([this] { loop(); });
}

void SessionRunner::loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(cfg_.pipeline.ehcc.control_period));
  auto deadline = clock::now();
  std::vector<std::string> batch;
  while (!stop_requested_) {
    {
      std::lock_guard lock(inbox_mu_);
      batch.swap(inbox_);
    }
    const std::uint64_t k = session_.tick_index();
    session_.set_degraded(degraded_);
    Session::TickResult result = session_.tick(batch);
    if (!batch.empty()) recording_.inputs.push_back({k, std::move(batch)});
    batch.clear();
    log_.push_back(std::move(result.record));
    for (OutboundMsg& m : result.frames) outbound_.push(std::move(m));
    {
      std::lock_guard lock(cb_mu_);
      if (on_frames_ && !result.frames.empty()) on_frames_();
    }
    ++report_.ticks;
    if (options_.max_ticks > 0 && report_.ticks >= options_.max_ticks) break;

    deadline += period;
    const auto now = clock::now();
    if (now > deadline) {
      ++report_.overruns;
      // Keep the rate; do not burst to catch up.
      if (now - deadline > period) deadline = now;
    } else {
      std::this_thread::sleep_until(deadline);
    }
  }
  running_ = false;
}

void SessionRunner::finish() {
  std::lock_guard lock(finish_mu_);
  if (finished_) return;
  if (thread_.joinable()) thread_.join();
  finished_ = true;
  recording_.tick_count = report_.ticks;
  report_.dropped_frames = outbound_.dropped();
  report_.degraded = degraded_;
  if (!options_.record_dir.empty()) {
    std::filesystem::create_directories(options_.record_dir);
    write_recording(options_.record_dir / "inputs.jsonl", recording_);
    write_log_jsonl(options_.record_dir / "log.jsonl", log_);
    std::ofstream os(options_.record_dir / "session.json");
    os << to_json(cfg_).dump(2) << '\n';
  }
}

RunnerReport SessionRunner::stop() {
  stop_requested_ = true;
  finish();
  return report_;
}

RunnerReport SessionRunner::wait() {
  if (thread_.joinable()) thread_.join();
  finish();
  return report_;
}

}  // namespace teleop::service
