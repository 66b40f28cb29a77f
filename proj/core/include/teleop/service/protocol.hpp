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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "teleop/se3.hpp"

namespace teleop::service {

// Wire protocol: one JSON object per WebSocket text frame. Every message
// carries "v" (protocol version) and "kind". See docs/protocol.md.

inline constexpr int kProtocolVersion = 1;

struct StylusPoseMsg {
  Pose pose;
};
/// engage = false disengages.
struct EngageRequestMsg {
  bool engage = true;
};
struct SetParamMsg {
  std::string name;
  nlohmann::json value;
};
struct ToggleLimiterMsg {
  bool enabled = true;
};
struct FootPedalMsg {
  bool pressed = false;
};

struct InboundMsg {
  std::variant<StylusPoseMsg, EngageRequestMsg, SetParamMsg, ToggleLimiterMsg, FootPedalMsg> body;
  /// Informational only; the control clock is internal.
  std::optional<double> client_time;

  const char* kind() const;
};

class ProtocolError : public std::runtime_error {
 public:
  /// code: parse_error, version_mismatch, unknown_kind, invalid_payload,
  /// invalid_param.
  ProtocolError(std::string code, const std::string& message);
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

InboundMsg parse_inbound(std::string_view text);
nlohmann::json to_json(const InboundMsg& msg);

enum class OutboundKind {
  kState,
  kEngagementStatus,
  kSafetyEvent,
  kFeedbackForce,
  kStatsSnapshot,
  kError,
};

const char* to_string(OutboundKind k);

struct OutboundMsg {
  OutboundKind kind = OutboundKind::kState;
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;  // strictly increasing over the whole session
  nlohmann::json payload;

  /// State, feedback and stats frames may be dropped under backpressure;
  /// engagement, safety and error frames never are.
  bool droppable() const;
  std::string serialize() const;
};

OutboundMsg parse_outbound(std::string_view text);

}  // namespace teleop::service
