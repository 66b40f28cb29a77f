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

#include <cstddef>
#include <limits>

#include "teleop/pose_filters.hpp"
#include "teleop/se3.hpp"

namespace teleop {

/*
 * Frame naming used throughout:
 *   leader base   H_b   haptic device base; stylus poses and feedback forces
 *   stylus        H_e
 *   robot base    R_b
 *   TCP           R_e   measured tool centre point, camera looks along its z
 *   desired TCP   R_ed  output of the eye-hand mapping
 *   compliant     R_c   output of the admittance law
 * "A_in_B" is the rotation that maps A coordinates into B coordinates.
 */

struct FrameConfig {
  Rotation3 leader_base_in_robot_base;
  /// Relative TCP orientation the operator aligns to during engagement.
  Rotation3 tcp_in_stylus;
  /// Fixed mapping of stylus-frame quantities into the TCP frame.
  Rotation3 stylus_in_tcp;
  /// The camera optical axis coincides with the TCP z axis.
  bool camera_axis_is_z = true;

  /// stylus_in_tcp maps z onto z (within 1e-12), so a roll about the TCP z
  /// axis equals a roll about the stylus z axis.
  bool z_axis_preserved() const;
};

/// Diagonal twist scaling; the rotational block is fixed to identity.
class ScalingMatrix {
 public:
  ScalingMatrix() = default;
  /// Throws std::invalid_argument unless every gain is finite and > 0.
  explicit ScalingMatrix(const Vec3& translational_gains);

  const Vec3& translational_gains() const { return gains_; }
  Vec6 diagonal() const;
  Twist apply(const Twist& v) const;

 private:
  Vec3 gains_{0.5, 0.5, 0.5};
};

struct EhccState {
  FilteredPose prev_filtered;
  Transform prev_desired;
  Rotation3 engagement_reference;  // measured TCP rotation latched at engagement
  double phi = 0.0;                // last valid viewing angle
  bool engaged = false;
  double control_period = 0.008;
};

/// Engagement target: rotation from the stylus through the fixed frames,
/// translation pinned to the current TCP position.
Transform engagement_target(const Transform& stylus_in_leader_base, const Vec3& tcp_position,
                            const FrameConfig& cfg);

/// True iff the angle of measured^T * target is strictly below tol_rad.
bool engagement_aligned(const Rotation3& measured_tcp, const Rotation3& target, double tol_rad);

/**
 * Stylus twist in the leader base from two consecutive filtered poses.
 *
 * Linear part: position difference / T_s. Angular part: the axis-angle of
 * q(k-1)^* q(k) is a rotation in the previous stylus frame; it is mapped into
 * the leader base with R(k-1) before dividing by T_s.
 */
Twist hd_twist(const FilteredPose& prev, const FilteredPose& curr, double control_period);

struct ViewingAngle {
  double phi = 0.0;
  bool degenerate = false;
};

/// Camera roll about the TCP z axis relative to the engagement orientation.
ViewingAngle viewing_angle(const Rotation3& measured_tcp, const Rotation3& engagement_reference);

/// Viewing-angle compensated stylus-to-TCP mapping, roll applied in the TCP
/// frame: R_z(phi) * stylus_in_tcp. This is the form the controller uses.
Rotation3 view_mapping_tcp_roll(double phi, const FrameConfig& cfg);

/// Same mapping with the roll applied in the stylus frame:
/// stylus_in_tcp * R_z(phi). Equal to the TCP-roll form only when
/// cfg.z_axis_preserved().
Rotation3 view_mapping_stylus_roll(double phi, const FrameConfig& cfg);

/// Stylus twist (leader base) -> desired TCP twist (robot base) through an
/// explicit stylus-to-TCP mapping.
Twist map_twist_with(const Twist& stylus_twist, const Rotation3& stylus_orientation,
                     const Rotation3& measured_tcp, const Rotation3& view_mapping,
                     const ScalingMatrix& scaling);

/// Desired TCP twist in the robot base for viewing angle phi.
Twist map_twist(const Twist& stylus_twist, const FilteredPose& stylus, const Rotation3& measured_tcp,
                double phi, const ScalingMatrix& scaling, const FrameConfig& cfg);

/**
 * One integration step of the desired TCP transform.
 *
 * Rotation: previous measured TCP rotation times exp of the angular step
 * expressed in that measured frame. Translation: previous desired position
 * plus linear velocity * T_s. Updates state.prev_desired.
 */
Transform integrate_reference(EhccState& state, const Twist& desired_twist,
                              const Rotation3& measured_tcp_prev);

/// Alignment debounce: engaged once aligned continuously for hold_s.
class EngagementDebouncer {
 public:
  enum class Status { kIdle, kAligning, kEngaged, kTimedOut };

  explicit EngagementDebouncer(double hold_s = 0.5,
                               double timeout_s = std::numeric_limits<double>::infinity());

  void start(double t);
  Status update(bool aligned, double t);
  void reset() { status_ = Status::kIdle; }

  Status status() const { return status_; }
  double hold_s() const { return hold_s_; }
  double timeout_s() const { return timeout_s_; }

 private:
  double hold_s_;
  double timeout_s_;
  Status status_ = Status::kIdle;
  double started_at_ = 0.0;
  double aligned_since_ = 0.0;
  bool aligned_run_ = false;
};

struct EhccParams {
  FrameConfig frames;
  ScalingMatrix scaling;
  double control_period = 0.008;
  std::size_t pose_window = 16;
  double engagement_tolerance = 0.02;  // rad
};

/// Leader-side mapping from stylus poses to desired TCP poses.
class EyeHandController {
 public:
  struct Step {
    Pose desired;
    Twist stylus_twist;
    Twist desired_twist;
    double phi = 0.0;
    bool phi_degenerate = false;
    FilteredPose filtered;
  };

  explicit EyeHandController(const EhccParams& params);

  /// Feeds the tremor filter without producing a reference (pre-engagement).
  FilteredPose observe(const Pose& raw_stylus);

  Transform engagement_target(const Pose& raw_stylus, const Pose& measured_tcp) const;
  bool aligned(const Pose& raw_stylus, const Pose& measured_tcp) const;

  /// Latches the measured TCP as the engagement reference and starts
  /// integrating from it.
  void engage(const Pose& measured_tcp);
  void disengage();
  bool engaged() const { return state_.engaged; }

  /// Filter -> stylus twist -> viewing angle -> mapping -> integration.
  /// Throws std::logic_error when not engaged.
  Step step(const Pose& raw_stylus, const Pose& measured_tcp);

  void set_scaling(const ScalingMatrix& scaling) { params_.scaling = scaling; }
  const EhccParams& params() const { return params_; }
  const EhccState& state() const { return state_; }

 private:
  EhccParams params_;
  EhccState state_;
  PoseFilter filter_;
};

}  // namespace teleop
