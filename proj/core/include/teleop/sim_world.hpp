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
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "teleop/eye_hand.hpp"
#include "teleop/haptic_feedback.hpp"
#include "teleop/interaction.hpp"
#include "teleop/se3.hpp"

namespace teleop {

// ---------------------------------------------------------------------------
// Deterministic noise

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal sample that depends only on (seed, stream, counter).
/// Box-Muller on two splitmix64 hashes; identical on every platform.
double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// ---------------------------------------------------------------------------
// Leader script

struct TremorComponent {
  double amplitude = 0.0;     // m
  double frequency_hz = 0.0;  // Hz
  double phase = 0.0;         // rad
};

/// Position tremor. Each sinusoid drives all three axes with phase offsets
/// of 0, 2 pi / 3 and 4 pi / 3; the Gaussian part is independent per axis.
struct TremorSpec {
  std::vector<TremorComponent> components;
  double noise_std = 0.0;  // m
  std::uint64_t seed = 0;

  static TremorSpec none() { return {}; }
  /// 10 Hz / 0.3 mm and 8.5 Hz / 0.15 mm plus 0.05 mm white noise.
  static TremorSpec physiological(std::uint64_t seed);

  void validate() const;
  /// Deterministic in (spec, t); noise is keyed on round(t * 1e6).
  Vec3 displacement(double t) const;
};

enum class Interpolation { kLinear, kHold };

struct Waypoint {
  double time = 0.0;  // s
  Pose pose;
  /// Interpolation of the segment that starts at this waypoint.
  Interpolation mode = Interpolation::kLinear;
};

struct LeaderScript {
  std::vector<Waypoint> waypoints;
  TremorSpec tremor;

  /// Throws std::invalid_argument unless non-empty with strictly increasing
  /// times and a valid tremor.
  void validate() const;
  double end_time() const;
};

/// Interpolated waypoint pose plus tremor. Before the first waypoint the
/// first pose is held, after the last the last one.
Pose leader_sample(const LeaderScript& script, double t);

// ---------------------------------------------------------------------------
// Follower and contact

struct FollowerModel {
  Pose pose;
  double max_linear_speed = 0.25;  // m/s
  double max_angular_speed = 1.0;  // rad/s

  void validate() const;
};

/// Moves toward the commanded pose, limited per axis group by the speed
/// limits; reaches it when it is within one step.
Pose follower_step(const FollowerModel& model, const Pose& commanded, double control_period);

/// Half-space bounded by a plane; the solid is on the -normal side.
struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.01;
};

struct ContactSurface {
  std::variant<Plane, Sphere> geometry;
  double stiffness = 5000.0;  // N/m
  double damping = 0.0;       // N s/m

  void validate() const;
  /// Penetration depth (> 0 inside) and outward normal at the tip.
  double penetration(const Vec3& tip, Vec3* normal) const;
};

/// Kelvin-Voigt normal force summed over the penetrated surfaces, in the
/// base frame; torque is zero.
Wrench contact_wrench(const Pose& tool_tip, const Twist& tip_velocity,
                      const std::vector<ContactSurface>& surfaces);

struct WorldConfig {
  FollowerModel follower;
  std::vector<ContactSurface> surfaces;
  double sensor_noise_std = 0.0;  // N, per force axis
  std::uint64_t sensor_seed = 0;

  void validate() const;
};

/// Follower robot plus environment and a force sensor in the tool frame.
class World {
 public:
  explicit World(const WorldConfig& cfg);

  const Pose& measured() const { return follower_.pose; }
  /// Noise-free contact wrench in the base frame at the current state.
  const Wrench& contact() const { return contact_; }
  /// Sensor reading in the tool frame (noise included).
  const Wrench& sensed() const { return sensed_; }

  /// Advances the follower toward commanded and recomputes the contact.
  void step(const Pose& commanded, double control_period, std::uint64_t tick);

  const WorldConfig& config() const { return cfg_; }

 private:
  void sense(const Twist& velocity, std::uint64_t tick);

  WorldConfig cfg_;
  FollowerModel follower_;
  Wrench contact_;
  Wrench sensed_;
};

// ---------------------------------------------------------------------------
// Closed loop

struct PipelineParams {
  EhccParams ehcc;
  InteractionParams interaction;
  HfcParams hfc;
  /// Continuous alignment needed before engaging.
  double engagement_hold = 0.5;  // s
  double engagement_timeout = std::numeric_limits<double>::infinity();
};

enum class EngagementState { kIdle, kAligning, kEngaged, kTimedOut };

const char* to_string(EngagementState s);

struct LogRecord {
  std::uint64_t tick = 0;
  double t = 0.0;
  double a = 0.0;  // |sensed force| after the follower moved, N
  double b = 0.0;  // virtual penetration |p_Red^Re|, m
  bool engaged = false;
  double phi = 0.0;
  Pose stylus;
  Pose desired;
  Pose commanded;
  Pose measured;
  Vec3 force = Vec3::Zero();  // tool frame
  Vec3 feedback = Vec3::Zero();  // leader base
  Vec3 tracking_error = Vec3::Zero();
  double scale_factor = 1.0;
  SafetyEvents events;
};

/**
 * One control cycle: leader pose -> eye-hand mapping -> interaction
 * controller -> follower -> contact -> haptic feedback.
 *
 * Until engagement the follower holds and stylus poses only feed the
 * tremor filter. Ticks without a stylus pose leave the eye-hand mapping
 * idle and the controller holds its last valid reference.
 */
class TeleopPipeline {
 public:
  TeleopPipeline(const PipelineParams& params, const WorldConfig& world);

  /// Starts the alignment debounce.
  void request_engagement();
  void disengage();

  LogRecord tick(const std::optional<Pose>& stylus);

  EngagementState engagement() const { return engagement_; }
  /// Engagement target for the latest stylus pose; nullopt before any
  /// stylus pose arrived.
  std::optional<Transform> engagement_target() const;
  bool aligned() const;

  std::uint64_t tick_index() const { return tick_; }
  double time() const { return static_cast<double>(tick_) * params_.ehcc.control_period; }

  World& world() { return world_; }
  const World& world() const { return world_; }
  EyeHandController& ehcc() { return ehcc_; }
  InteractionController& controller() { return controller_; }
  const InteractionController& controller() const { return controller_; }
  HapticFeedbackController& hfc() { return hfc_; }
  const HapticFeedbackController& hfc() const { return hfc_; }
  const PipelineParams& params() const { return params_; }
  const std::optional<Pose>& last_stylus() const { return last_stylus_; }

 private:
  PipelineParams params_;
  World world_;
  EyeHandController ehcc_;
  InteractionController controller_;
  HapticFeedbackController hfc_;
  EngagementDebouncer debouncer_;
  EngagementState engagement_ = EngagementState::kIdle;
  std::optional<Pose> last_stylus_;
  FilteredPose filtered_stylus_;
  double phi_ = 0.0;
  std::uint64_t tick_ = 0;
};

}  // namespace teleop
