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

#include "teleop/eye_hand.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

bool FrameConfig::z_axis_preserved() const {
  return (stylus_in_tcp * Vec3::UnitZ() - Vec3::UnitZ()).norm() < 1e-12;
}

ScalingMatrix::ScalingMatrix(const Vec3& translational_gains) : gains_(translational_gains) {
  if (!gains_.allFinite() || (gains_.array() <= 0.0).any()) {
    throw std::invalid_argument("ScalingMatrix: gains must be finite and positive");
  }
}

Vec6 ScalingMatrix::diagonal() const {
  Vec6 d;
  d << gains_, Vec3::Ones();
  return d;
}

Twist ScalingMatrix::apply(const Twist& v) const {
  return {gains_.cwiseProduct(v.linear), v.angular};
}

Transform engagement_target(const Transform& stylus_in_leader_base, const Vec3& tcp_position,
                            const FrameConfig& cfg) {
  return {cfg.leader_base_in_robot_base * stylus_in_leader_base.rotation * cfg.tcp_in_stylus,
          tcp_position};
}

bool engagement_aligned(const Rotation3& measured_tcp, const Rotation3& target, double tol_rad) {
  return rotation_angle(measured_tcp.transpose() * target) < tol_rad;
}

Twist hd_twist(const FilteredPose& prev, const FilteredPose& curr, double control_period) {
  if (!(control_period > 0.0)) {
    throw std::invalid_argument("hd_twist: control period must be positive");
  }
  const UnitQuaternion relative = prev.orientation.conjugate() * curr.orientation;
  const Vec3 body_step = quat_log(relative);
  Twist v;
  v.linear = (curr.position - prev.position) / control_period;
  v.angular = prev.orientation.rotate(body_step) / control_period;
  return v;
}

ViewingAngle viewing_angle(const Rotation3& measured_tcp, const Rotation3& engagement_reference) {
  const SwingTwist st =
      swing_twist_about_z((engagement_reference.transpose() * measured_tcp).to_quaternion());
  return {st.twist_angle, st.degenerate};
}

Rotation3 view_mapping_tcp_roll(double phi, const FrameConfig& cfg) {
  return elementary_rotation(Axis::kZ, phi) * cfg.stylus_in_tcp;
}

Rotation3 view_mapping_stylus_roll(double phi, const FrameConfig& cfg) {
  return cfg.stylus_in_tcp * elementary_rotation(Axis::kZ, phi);
}

Twist map_twist_with(const Twist& stylus_twist, const Rotation3& stylus_orientation,
                     const Rotation3& measured_tcp, const Rotation3& view_mapping,
                     const ScalingMatrix& scaling) {
  // leader base -> stylus -> TCP (with roll), then scale, then robot base
  const Twist in_tcp = rotate_twist(view_mapping * stylus_orientation.transpose(), stylus_twist);
  return rotate_twist(measured_tcp, scaling.apply(in_tcp));
}

Twist map_twist(const Twist& stylus_twist, const FilteredPose& stylus, const Rotation3& measured_tcp,
                double phi, const ScalingMatrix& scaling, const FrameConfig& cfg) {
  return map_twist_with(stylus_twist, Rotation3::from_quaternion(stylus.orientation), measured_tcp,
                        view_mapping_tcp_roll(phi, cfg), scaling);
}

Transform integrate_reference(EhccState& state, const Twist& desired_twist,
                              const Rotation3& measured_tcp_prev) {
  const double ts = state.control_period;
  const Vec3 step_in_tcp = measured_tcp_prev.transpose() * (desired_twist.angular * ts);
  Transform next;
  next.rotation = measured_tcp_prev * exp_so3(step_in_tcp);
  next.translation = state.prev_desired.translation + desired_twist.linear * ts;
  state.prev_desired = next;
  return next;
}

EngagementDebouncer::EngagementDebouncer(double hold_s, double timeout_s)
    : hold_s_(hold_s), timeout_s_(timeout_s) {
  if (!(hold_s >= 0.0) || !(timeout_s > 0.0)) {
    throw std::invalid_argument("EngagementDebouncer: hold must be >= 0, timeout > 0");
  }
}

void EngagementDebouncer::start(double t) {
  status_ = Status::kAligning;
  started_at_ = t;
  aligned_run_ = false;
}

EngagementDebouncer::Status EngagementDebouncer::update(bool aligned, double t) {
  if (status_ != Status::kAligning) {
    return status_;
  }
  if (aligned) {
    if (!aligned_run_) {
      aligned_run_ = true;
      aligned_since_ = t;
    }
    // 1e-9 absorbs the rounding of t = k * T_s.
    if (t - aligned_since_ >= hold_s_ - 1e-9) {
      status_ = Status::kEngaged;
      return status_;
    }
  } else {
    aligned_run_ = false;
  }
  if (t - started_at_ >= timeout_s_ - 1e-9) {
    status_ = Status::kTimedOut;
  }
  return status_;
}

EyeHandController::EyeHandController(const EhccParams& params)
    : params_(params), filter_(params.pose_window) {
  if (!(params.control_period > 0.0)) {
    throw std::invalid_argument("EyeHandController: control period must be positive");
  }
  if (!(params.engagement_tolerance > 0.0)) {
    throw std::invalid_argument("EyeHandController: engagement tolerance must be positive");
  }
  state_.control_period = params.control_period;
}

FilteredPose EyeHandController::observe(const Pose& raw_stylus) { return filter_.push(raw_stylus); }

Transform EyeHandController::engagement_target(const Pose& raw_stylus,
                                               const Pose& measured_tcp) const {
  return teleop::engagement_target(raw_stylus.to_transform(), measured_tcp.position,
                                   params_.frames);
}

bool EyeHandController::aligned(const Pose& raw_stylus, const Pose& measured_tcp) const {
  return engagement_aligned(Rotation3::from_quaternion(measured_tcp.orientation),
                            engagement_target(raw_stylus, measured_tcp).rotation,
                            params_.engagement_tolerance);
}

void EyeHandController::engage(const Pose& measured_tcp) {
  state_.prev_filtered = filter_.value();
  state_.prev_desired = measured_tcp.to_transform();
  state_.engagement_reference = state_.prev_desired.rotation;
  state_.phi = 0.0;
  state_.engaged = true;
}

void EyeHandController::disengage() { state_.engaged = false; }

EyeHandController::Step EyeHandController::step(const Pose& raw_stylus, const Pose& measured_tcp) {
  if (!state_.engaged) {
    throw std::logic_error("EyeHandController::step called before engagement");
  }
  Step out;
  out.filtered = filter_.push(raw_stylus);
  out.stylus_twist = hd_twist(state_.prev_filtered, out.filtered, params_.control_period);

  const Rotation3 measured = Rotation3::from_quaternion(measured_tcp.orientation);
  const ViewingAngle va = viewing_angle(measured, state_.engagement_reference);
  if (!va.degenerate) {
    state_.phi = va.phi;
  }
  out.phi = state_.phi;
  out.phi_degenerate = va.degenerate;

  out.desired_twist = map_twist(out.stylus_twist, out.filtered, measured, state_.phi,
                                params_.scaling, params_.frames);
  out.desired = Pose::from_transform(integrate_reference(state_, out.desired_twist, measured));
  state_.prev_filtered = out.filtered;
  return out;
}

}  // namespace teleop
