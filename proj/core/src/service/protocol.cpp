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

#include "teleop/service/protocol.hpp"

#include <array>
#include <cmath>

#include "teleop/config.hpp"

namespace teleop::service {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<OutboundKind, const char*>, 6> kOutboundNames = {{
    {OutboundKind::kState, "state"},
    {OutboundKind::kEngagementStatus, "engagement_status"},
    {OutboundKind::kSafetyEvent, "safety_event"},
    {OutboundKind::kFeedbackForce, "feedback_force"},
    {OutboundKind::kStatsSnapshot, "stats_snapshot"},
    {OutboundKind::kError, "error"},
}};

void only_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = key == "v" || key == "kind" || key == "t";
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ProtocolError("invalid_payload", "unexpected field \"" + key + "\"");
  }
}

bool boolean(const json& j, const char* key, bool fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) {
    throw ProtocolError("invalid_payload", std::string("\"") + key + "\" must be a boolean");
  }
  return it->get<bool>();
}

}  // namespace

ProtocolError::ProtocolError(std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

const char* InboundMsg::kind() const {
  constexpr std::array<const char*, 5> names = {"stylus_pose", "engage_request", "set_param",
                                                "toggle_limiter", "foot_pedal"};
  return names[body.index()];
}

InboundMsg parse_inbound(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError("parse_error", e.what());
  }
  if (!j.is_object()) throw ProtocolError("parse_error", "expected a JSON object");
  const auto v = j.find("v");
  if (v == j.end() || !v->is_number_integer()) {
    throw ProtocolError("version_mismatch", "missing integer field \"v\"");
  }
  if (v->get<std::int64_t>() != kProtocolVersion) {
    throw ProtocolError("version_mismatch",
                        "expected v = " + std::to_string(kProtocolVersion));
  }
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) {
    throw ProtocolError("unknown_kind", "missing string field \"kind\"");
  }
  const std::string kind = kind_it->get<std::string>();

  InboundMsg msg;
  if (const auto t = j.find("t"); t != j.end()) {
    if (!t->is_number() || !std::isfinite(t->get<double>())) {
      throw ProtocolError("invalid_payload", "\"t\" must be a finite number");
    }
    msg.client_time = t->get<double>();
  }

  if (kind == "stylus_pose") {
    only_keys(j, {"pose"});
    const auto p = j.find("pose");
    if (p == j.end()) throw ProtocolError("invalid_payload", "missing \"pose\"");
    try {
      msg.body = StylusPoseMsg{parse_pose(*p, "/pose")};
    } catch (const ConfigError& e) {
      throw ProtocolError("invalid_payload", e.what());
    }
  } else if (kind == "engage_request") {
    only_keys(j, {"engage"});
    msg.body = EngageRequestMsg{boolean(j, "engage", true)};
  } else if (kind == "set_param") {
    only_keys(j, {"name", "value"});
    const auto name = j.find("name");
    const auto value = j.find("value");
    if (name == j.end() || !name->is_string() || value == j.end()) {
      throw ProtocolError("invalid_payload", "set_param needs \"name\" and \"value\"");
    }
    msg.body = SetParamMsg{name->get<std::string>(), *value};
  } else if (kind == "toggle_limiter") {
    only_keys(j, {"enabled"});
    if (!j.contains("enabled")) throw ProtocolError("invalid_payload", "missing \"enabled\"");
    msg.body = ToggleLimiterMsg{boolean(j, "enabled", true)};
  } else if (kind == "foot_pedal") {
    only_keys(j, {"pressed"});
    if (!j.contains("pressed")) throw ProtocolError("invalid_payload", "missing \"pressed\"");
    msg.body = FootPedalMsg{boolean(j, "pressed", false)};
  } else {
    throw ProtocolError("unknown_kind", "unknown kind \"" + kind + "\"");
  }
  return msg;
}

json to_json(const InboundMsg& msg) {
  json j = {{"v", kProtocolVersion}, {"kind", msg.kind()}};
  if (msg.client_time) j["t"] = *msg.client_time;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, StylusPoseMsg>) {
          j["pose"] = teleop::to_json(b.pose);
        } else if constexpr (std::is_same_v<T, EngageRequestMsg>) {
          j["engage"] = b.engage;
        } else if constexpr (std::is_same_v<T, SetParamMsg>) {
          j["name"] = b.name;
          j["value"] = b.value;
        } else if constexpr (std::is_same_v<T, ToggleLimiterMsg>) {
          j["enabled"] = b.enabled;
        } else {
          j["pressed"] = b.pressed;
        }
      },
      msg.body);
  return j;
}

const char* to_string(OutboundKind k) {
  for (const auto& [kind, name] : kOutboundNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

bool OutboundMsg::droppable() const {
  return kind == OutboundKind::kState || kind == OutboundKind::kFeedbackForce ||
         kind == OutboundKind::kStatsSnapshot;
}

std::string OutboundMsg::serialize() const {
  const json j = {{"v", kProtocolVersion},
                  {"kind", to_string(kind)},
                  {"tick", tick},
                  {"seq", seq},
                  {"payload", payload}};
  return j.dump();
}

OutboundMsg parse_outbound(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError("parse_error", e.what());
  }
  if (!j.is_object() || j.value("v", -1) != kProtocolVersion) {
    throw ProtocolError("version_mismatch", "expected v = " + std::to_string(kProtocolVersion));
  }
  OutboundMsg m;
  const std::string kind = j.value("kind", "");
  bool found = false;
  for (const auto& [k, name] : kOutboundNames) {
    if (kind == name) {
      m.kind = k;
      found = true;
    }
  }
  if (!found) throw ProtocolError("unknown_kind", "unknown kind \"" + kind + "\"");
  try {
    m.tick = j.at("tick").get<std::uint64_t>();
    m.seq = j.at("seq").get<std::uint64_t>();
    m.payload = j.at("payload");
  } catch (const json::exception& e) {
    throw ProtocolError("invalid_payload", e.what());
  }
  return m;
}

}  // namespace teleop::service
