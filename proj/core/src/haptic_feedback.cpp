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

#include "teleop/haptic_feedback.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

void HfcParams::validate() const {
  if (!stiffness.allFinite() || !damping.allFinite() || (stiffness.array() < 0.0).any() ||
      (damping.array() < 0.0).any()) {
    throw std::invalid_argument("HfcParams: gains must be finite and >= 0");
  }
  if (!(max_force > 0.0) || !std::isfinite(max_force)) {
    throw std::invalid_argument("HfcParams: max_force must be positive");
  }
  if (!(dead_band >= 0.0) || !std::isfinite(dead_band)) {
    throw std::invalid_argument("HfcParams: dead_band must be >= 0");
  }
}

Vec3 feedback_force(const Vec3& error_tool, const Vec3& error_rate_tool,
                    const Rotation3& stylus_in_leader_base, const Rotation3& tcp_in_stylus_view,
                    const HfcParams& params) {
  const Rotation3 r = stylus_in_leader_base * tcp_in_stylus_view;
  return params.stiffness.cwiseProduct(r * error_tool) +
         params.damping.cwiseProduct(r * error_rate_tool);
}

Vec3 saturate(const Vec3& f, double f_max) {
  if (!(f_max > 0.0)) {
    throw std::invalid_argument("saturate: f_max must be positive");
  }
  const double n = f.norm();
  if (n < f_max) {
    return f;
  }
  return f * (f_max / n);
}

Vec3 dead_band(const Vec3& f, double contact_force_norm, double f_db) {
  return contact_force_norm > f_db ? f : Vec3::Zero();
}

Rotation3 force_view_mapping(double phi, const FrameConfig& frames) {
  return view_mapping_tcp_roll(phi, frames).transpose();
}

HapticFeedbackController::HapticFeedbackController(const HfcParams& params, double control_period,
                                                   std::size_t rate_window)
    : params_(params), period_(control_period), rate_filter_(rate_window) {
  params.validate();
  if (!(control_period > 0.0)) {
    throw std::invalid_argument("HapticFeedbackController: control period must be positive");
  }
}

void HapticFeedbackController::reset() {
  rate_filter_.reset();
  prev_error_.setZero();
  has_prev_ = false;
}

void HapticFeedbackController::set_params(const HfcParams& params) {
  params.validate();
  params_ = params;
}

HapticFeedbackController::Output HapticFeedbackController::tick(
    const Vec3& tracking_error, double contact_force_norm, const Rotation3& stylus_in_leader_base,
    double phi, const FrameConfig& frames) {
  Output out;
  const Vec3 diff = has_prev_ ? Vec3((tracking_error - prev_error_) / period_) : Vec3::Zero();
  prev_error_ = tracking_error;
  has_prev_ = true;
  out.error_rate = rate_filter_.push(diff);

  out.raw = feedback_force(tracking_error, out.error_rate, stylus_in_leader_base,
                           force_view_mapping(phi, frames), params_);
  const Vec3 sat = saturate(out.raw, params_.max_force);
  out.saturated = out.raw.norm() >= params_.max_force;
  out.force = dead_band(sat, contact_force_norm, params_.dead_band);
  out.gated = !(contact_force_norm > params_.dead_band);
  return out;
}

}  // namespace teleop
