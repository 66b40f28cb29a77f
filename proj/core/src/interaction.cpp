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

#include "teleop/interaction.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// cosh(mu t) and sinh(mu t) / mu as functions of z = mu^2 t^2, valid for
// either sign of z (z < 0 gives cos and sin). Series near z = 0 so critical
// damping needs no special branch.
void exp_coefficients(double mu2, double t, double* c, double* s) {
  const double z = mu2 * t * t;
  if (std::abs(z) < 1e-4) {
    *c = 1.0 + z / 2.0 * (1.0 + z / 12.0 * (1.0 + z / 30.0 * (1.0 + z / 56.0)));
    *s = t * (1.0 + z / 6.0 * (1.0 + z / 20.0 * (1.0 + z / 42.0 * (1.0 + z / 72.0))));
  } else if (z > 0.0) {
    const double mu = std::sqrt(mu2);
    *c = std::cosh(mu * t);
    *s = std::sinh(mu * t) / mu;
  } else {
    const double mu = std::sqrt(-mu2);
    *c = std::cos(mu * t);
    *s = std::sin(mu * t) / mu;
  }
}

}  // namespace

AdmittanceParams AdmittanceParams::critically_damped(const Vec6& mass, const Vec6& stiffness) {
  AdmittanceParams p;
  p.mass = mass;
  p.stiffness = stiffness;
  p.damping = 2.0 * mass.cwiseProduct(stiffness).cwiseSqrt();
  return p;
}

AdmittanceParams AdmittanceParams::defaults() { return {}; }

void AdmittanceParams::validate() const {
  for (const Vec6* v : {&mass, &damping, &stiffness}) {
    if (!v->allFinite() || (v->array() <= 0.0).any()) {
      throw std::invalid_argument("AdmittanceParams: entries must be finite and positive");
    }
  }
}

Vec6 AdmittanceState::offset_vector() const {
  Vec6 x;
  x << offset_position, offset_orientation;
  return x;
}

AdmittanceIntegrator::AdmittanceIntegrator(const AdmittanceParams& params, double control_period)
    : params_(params), period_(control_period) {
  params.validate();
  if (!(control_period > 0.0) || !std::isfinite(control_period)) {
    throw std::invalid_argument("AdmittanceIntegrator: control period must be positive");
  }
  const double t = control_period;
  for (int i = 0; i < 6; ++i) {
    const double m = params.mass(i);
    const double k = params.stiffness(i) / m;
    const double d = params.damping(i) / m;
    // A = [0 1; -k -d], eigenvalues s +- mu with s = -d/2, mu^2 = s^2 - k.
    const double s = -0.5 * d;
    const double mu2 = s * s - k;
    double c = 0.0;
    double sh = 0.0;
    exp_coefficients(mu2, t, &c, &sh);
    const double e = std::exp(s * t);
    // e^{At} = e^{st} (c I + sh (A - s I))
    AxisMap& ax = axes_[i];
    ax.a00 = e * (c - sh * s);
    ax.a01 = e * sh;
    ax.a10 = e * (-sh * k);
    ax.a11 = e * (c + sh * (-d - s));
    // B_d = A^{-1} (A_d - I) [0; 1/m], A^{-1} = [-d/k -1/k; 1 0]
    const double g0 = ax.a01 / m;
    const double g1 = (ax.a11 - 1.0) / m;
    ax.b0 = (-d * g0 - g1) / k;
    ax.b1 = g0;
  }
}

AdmittanceState AdmittanceIntegrator::step(const AdmittanceState& state, const Wrench& h) const {
  const Vec6 x = state.offset_vector();
  const Vec6 v = state.velocity.as_vector();
  const Vec6 u = h.as_vector();
  Vec6 xn;
  Vec6 vn;
  for (int i = 0; i < 6; ++i) {
    const AxisMap& ax = axes_[i];
    xn(i) = ax.a00 * x(i) + ax.a01 * v(i) + ax.b0 * u(i);
    vn(i) = ax.a10 * x(i) + ax.a11 * v(i) + ax.b1 * u(i);
  }
  AdmittanceState out;
  out.offset_position = xn.head<3>();
  out.offset_orientation = xn.tail<3>();
  out.velocity = Twist::from_vector(vn);
  out.acceleration = (u - params_.damping.cwiseProduct(vn) - params_.stiffness.cwiseProduct(xn))
                         .cwiseQuotient(params_.mass);
  return out;
}

AdmittanceState admittance_step(const AdmittanceState& state, const Wrench& h,
                                const AdmittanceParams& params, double control_period) {
  return AdmittanceIntegrator(params, control_period).step(state, h);
}

Vec3 reference_in_tool_frame(const Vec3& desired_position, const Vec3& tool_position,
                             const Rotation3& tool_rotation) {
  return tool_rotation.transpose() * (desired_position - tool_position);
}

Vec3 scale_reference(const Vec3& reference_in_tool, const Vec3& filtered_force, double gain) {
  if (!(gain >= 0.0)) {
    throw std::invalid_argument("scale_reference: gain must be >= 0");
  }
  return reference_in_tool / (1.0 + gain * filtered_force.norm());
}

Pose compose_compliant_pose(const Vec3& scaled_reference_in_tool,
                            const UnitQuaternion& desired_orientation, const Vec3& tool_position,
                            const Rotation3& tool_rotation, const AdmittanceState& state) {
  const Vec3 scaled_in_base = tool_position + tool_rotation * scaled_reference_in_tool;
  Pose out;
  out.position = scaled_in_base + desired_orientation.rotate(state.offset_position);
  out.orientation = desired_orientation * state.offset_quaternion();
  return out;
}

SafetyConfig SafetyConfig::with_threshold(double emergency_threshold) {
  SafetyConfig c;
  c.emergency_threshold = emergency_threshold;
  c.emergency_release = 0.8 * emergency_threshold;
  return c;
}

SafetyConfig SafetyConfig::disabled() {
  SafetyConfig c;
  c.force_scaling_gain = 0.0;
  c.emergency_threshold = kInf;
  c.emergency_release = kInf;
  c.max_translation_deviation = kInf;
  c.max_rotation_deviation = kInf;
  return c;
}

void SafetyConfig::validate() const {
  if (!(force_scaling_gain >= 0.0) || !std::isfinite(force_scaling_gain)) {
    throw std::invalid_argument("SafetyConfig: force_scaling_gain must be finite and >= 0");
  }
  if (!(emergency_threshold > 0.0) || !(emergency_release > 0.0) ||
      !(max_translation_deviation > 0.0) || !(max_rotation_deviation > 0.0)) {
    throw std::invalid_argument("SafetyConfig: thresholds must be positive");
  }
  if (std::isfinite(emergency_threshold) && !(emergency_release < emergency_threshold)) {
    throw std::invalid_argument("SafetyConfig: emergency_release must be below the threshold");
  }
}

SafetySupervisor::SafetySupervisor(const SafetyConfig& cfg) : cfg_(cfg) { cfg.validate(); }

void SafetySupervisor::set_config(const SafetyConfig& cfg) {
  cfg.validate();
  cfg_ = cfg;
}

void SafetySupervisor::reset(const Pose& last_valid) {
  last_valid_ = last_valid;
  latched_ = false;
}

SafetySupervisor::Selection SafetySupervisor::select_reference(const std::optional<Pose>& desired,
                                                               const Pose& measured,
                                                               double force_norm) {
  Selection out;
  if (desired) {
    last_valid_ = *desired;
    out.reference = *desired;
  } else {
    out.stale = true;
    if (!last_valid_) {
      last_valid_ = measured;
    }
    out.reference = *last_valid_;
  }

  if (latched_) {
    if (force_norm < cfg_.emergency_release) {
      latched_ = false;
    }
  } else if (force_norm > cfg_.emergency_threshold) {
    latched_ = true;
  }
  out.emergency = latched_;
  if (latched_) {
    out.reference = measured;
  }
  return out;
}

Pose SafetySupervisor::limit_deviation(const Pose& candidate, const Pose& measured,
                                       bool* clamped) const {
  const double dp = (candidate.position - measured.position).norm();
  const double dr = angular_distance(candidate.orientation, measured.orientation);
  const bool over = dp > cfg_.max_translation_deviation || dr > cfg_.max_rotation_deviation;
  if (clamped != nullptr) {
    *clamped = over;
  }
  return over ? measured : candidate;
}

InteractionController::InteractionController(const InteractionParams& params)
    : params_(params),
      integrator_(params.admittance, params.control_period),
      force_filter_(params.force_window),
      supervisor_(params.safety) {}

void InteractionController::reset(const Pose& measured) {
  state_ = {};
  force_filter_.reset();
  supervisor_.reset(measured);
}

void InteractionController::set_force_scaling_gain(double gain) {
  SafetyConfig cfg = params_.safety;
  cfg.force_scaling_gain = gain;
  set_safety(cfg);
}

void InteractionController::set_safety(const SafetyConfig& cfg) {
  supervisor_.set_config(cfg);
  params_.safety = cfg;
}

double InteractionController::effective_scaling_gain() const {
  return limiter_enabled_ ? params_.safety.force_scaling_gain : 0.0;
}

ControllerOutput InteractionController::tick(const std::optional<Pose>& desired,
                                             const Pose& measured, const Wrench& wrench) {
  ControllerOutput out;
  out.filtered_force = force_filter_.push(wrench.force);
  out.force_norm = wrench.force.norm();

  const SafetySupervisor::Selection sel =
      supervisor_.select_reference(desired, measured, out.force_norm);
  out.reference = sel.reference;
  out.events.stale_reference = sel.stale;
  out.events.emergency_active = sel.emergency;

  const Rotation3 tool = Rotation3::from_quaternion(measured.orientation);
  const Rotation3 ref_rot = Rotation3::from_quaternion(sel.reference.orientation);

  out.reference_in_tool = reference_in_tool_frame(sel.reference.position, measured.position, tool);
  out.virtual_penetration = out.reference_in_tool.norm();
  const double gain = effective_scaling_gain();
  out.scale_factor = 1.0 / (1.0 + gain * out.filtered_force.norm());
  out.scaled_reference_in_tool = scale_reference(out.reference_in_tool, out.filtered_force, gain);

  // The sensor reports the wrench in the tool frame; the admittance state
  // lives in the desired frame.
  const Wrench h = rotate_wrench(ref_rot.transpose() * tool, wrench);
  state_ = integrator_.step(state_, h);
  out.admittance = state_;

  out.compliant = compose_compliant_pose(out.scaled_reference_in_tool, sel.reference.orientation,
                                         measured.position, tool, state_);

  if (sel.emergency && params_.emergency_policy == EmergencyPolicy::kHoldMeasured) {
    out.commanded = measured;
  } else {
    out.commanded = supervisor_.limit_deviation(out.compliant, measured,
                                                &out.events.deviation_clamped);
  }

  const Vec3 compliant_in_tool = tool.transpose() * (out.compliant.position - measured.position);
  out.tracking_error = out.scaled_reference_in_tool - compliant_in_tool;
  return out;
}

}  // namespace teleop
