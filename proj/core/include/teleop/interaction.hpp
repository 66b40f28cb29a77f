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

#include <array>
#include <cstddef>
#include <limits>
#include <optional>

#include "teleop/pose_filters.hpp"
#include "teleop/se3.hpp"

namespace teleop {

/// Diagonal mass, damping and stiffness; entries 0..2 translational,
/// 3..5 rotational.
struct AdmittanceParams {
  Vec6 mass = (Vec6() << 6.0, 6.0, 6.0, 0.06, 0.06, 0.06).finished();
  Vec6 stiffness = (Vec6() << 1000.0, 1000.0, 1000.0, 10.0, 10.0, 10.0).finished();
  Vec6 damping = 2.0 * mass.cwiseProduct(stiffness).cwiseSqrt();  // critical

  /// damping_i = 2 sqrt(mass_i * stiffness_i).
  static AdmittanceParams critically_damped(const Vec6& mass, const Vec6& stiffness);
  static AdmittanceParams defaults();

  /// Throws std::invalid_argument unless every entry is finite and > 0.
  void validate() const;
};

/// Compliant frame relative to the desired frame.
struct AdmittanceState {
  Vec3 offset_position = Vec3::Zero();     // m
  Vec3 offset_orientation = Vec3::Zero();  // rad, rotation vector
  Twist velocity;
  Vec6 acceleration = Vec6::Zero();

  Vec6 offset_vector() const;
  UnitQuaternion offset_quaternion() const { return quat_exp(offset_orientation); }
};

/**
 * Mass-spring-damper integrator for the admittance law
 *   M a + D v + K x = h
 * with h the wrench the environment applies on the tool, held constant over
 * one period. Each axis is decoupled and discretized exactly
 * (zero-order hold), so the result does not depend on the step size beyond
 * the input sampling.
 */
class AdmittanceIntegrator {
 public:
  AdmittanceIntegrator(const AdmittanceParams& params, double control_period);

  AdmittanceState step(const AdmittanceState& state, const Wrench& h) const;

  const AdmittanceParams& params() const { return params_; }
  double control_period() const { return period_; }

 private:
  struct AxisMap {
    double a00, a01, a10, a11;  // state transition
    double b0, b1;              // input
  };

  AdmittanceParams params_;
  double period_;
  std::array<AxisMap, 6> axes_{};
};

AdmittanceState admittance_step(const AdmittanceState& state, const Wrench& h,
                                const AdmittanceParams& params, double control_period);

/// Desired position expressed in the measured tool frame: R^T (p_d - p_e).
Vec3 reference_in_tool_frame(const Vec3& desired_position, const Vec3& tool_position,
                             const Rotation3& tool_rotation);

/// p / (1 + gain * |f|). gain must be >= 0.
Vec3 scale_reference(const Vec3& reference_in_tool, const Vec3& filtered_force, double gain);

/// Compliant pose from the scaled tool-frame reference, the desired
/// orientation and the admittance offset.
Pose compose_compliant_pose(const Vec3& scaled_reference_in_tool,
                            const UnitQuaternion& desired_orientation, const Vec3& tool_position,
                            const Rotation3& tool_rotation, const AdmittanceState& state);

struct SafetyConfig {
  double force_scaling_gain = 0.0;  // 1/N; 0 disables the limiter
  double emergency_threshold = 15.0;
  double emergency_release = 12.0;
  double max_translation_deviation = 0.01;  // m
  double max_rotation_deviation = 0.2;      // rad

  /// Release threshold set to 0.8 * threshold.
  static SafetyConfig with_threshold(double emergency_threshold);
  /// Limiter gain 0 and every threshold infinite.
  static SafetyConfig disabled();

  void validate() const;
};

struct SafetyEvents {
  bool stale_reference = false;
  bool deviation_clamped = false;
  bool emergency_active = false;

  bool operator==(const SafetyEvents&) const = default;
};

/// What is commanded while the emergency latch is set.
enum class EmergencyPolicy {
  /// The measured pose becomes the reference and the admittance law keeps
  /// running, so the compliant frame backs away from the contact.
  kComplyFromMeasured,
  /// The measured pose itself is commanded.
  kHoldMeasured,
};

/// Stale-reference hold, emergency latch with hysteresis, deviation clamp.
class SafetySupervisor {
 public:
  struct Selection {
    Pose reference;
    bool stale = false;
    bool emergency = false;
  };

  explicit SafetySupervisor(const SafetyConfig& cfg);

  /// Stale hold first, then the emergency latch. The latch sets when
  /// force_norm > threshold and clears when force_norm < release.
  Selection select_reference(const std::optional<Pose>& desired, const Pose& measured,
                             double force_norm);

  /// measured if the candidate deviates beyond either threshold, else the
  /// candidate.
  Pose limit_deviation(const Pose& candidate, const Pose& measured, bool* clamped) const;

  /// Seeds the last valid reference (engagement).
  void reset(const Pose& last_valid);

  void set_config(const SafetyConfig& cfg);
  const SafetyConfig& config() const { return cfg_; }
  bool emergency_latched() const { return latched_; }
  const std::optional<Pose>& last_valid() const { return last_valid_; }

 private:
  SafetyConfig cfg_;
  std::optional<Pose> last_valid_;
  bool latched_ = false;
};

struct InteractionParams {
  AdmittanceParams admittance = AdmittanceParams::defaults();
  SafetyConfig safety;
  EmergencyPolicy emergency_policy = EmergencyPolicy::kComplyFromMeasured;
  double control_period = 0.008;
  std::size_t force_window = 8;
};

struct ControllerOutput {
  Pose commanded;
  Pose reference;  // desired pose actually fed to the limiter
  Pose compliant;
  Vec3 reference_in_tool = Vec3::Zero();
  Vec3 scaled_reference_in_tool = Vec3::Zero();
  double scale_factor = 1.0;
  double virtual_penetration = 0.0;  // |reference_in_tool|
  Vec3 tracking_error = Vec3::Zero();  // tool frame
  Vec3 filtered_force = Vec3::Zero();
  double force_norm = 0.0;  // raw
  AdmittanceState admittance;
  SafetyEvents events;
};

/// Follower-side controller: force filter, force-driven reference scaling,
/// admittance law, compliant pose, safety.
class InteractionController {
 public:
  explicit InteractionController(const InteractionParams& params);

  /// Clears the admittance state and filters and seeds the last valid
  /// reference with the measured pose.
  void reset(const Pose& measured);

  /// desired: fresh EHCC output or nullopt when none arrived this tick.
  /// wrench: measured contact wrench in the tool frame.
  ControllerOutput tick(const std::optional<Pose>& desired, const Pose& measured,
                        const Wrench& wrench);

  void set_force_scaling_gain(double gain);
  void set_limiter_enabled(bool enabled) { limiter_enabled_ = enabled; }
  bool limiter_enabled() const { return limiter_enabled_; }
  double effective_scaling_gain() const;
  void set_safety(const SafetyConfig& cfg);

  const InteractionParams& params() const { return params_; }
  const AdmittanceState& admittance_state() const { return state_; }
  const SafetySupervisor& supervisor() const { return supervisor_; }

 private:
  InteractionParams params_;
  AdmittanceIntegrator integrator_;
  AdmittanceState state_;
  VectorWindow force_filter_;
  SafetySupervisor supervisor_;
  bool limiter_enabled_ = true;
};

}  // namespace teleop
