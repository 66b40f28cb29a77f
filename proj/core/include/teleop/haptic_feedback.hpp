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

#include "teleop/eye_hand.hpp"
#include "teleop/pose_filters.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct HfcParams {
  Vec3 stiffness{200.0, 200.0, 200.0};  // N/m, diagonal
  Vec3 damping{5.0, 5.0, 5.0};          // N s/m, diagonal
  double max_force = 3.3;               // N
  double dead_band = 0.1;               // N

  void validate() const;
};

/// Virtual spring-damper on the admittance tracking error, after rotating
/// both error vectors from the tool frame into the leader base through the
/// stylus frame.
Vec3 feedback_force(const Vec3& error_tool, const Vec3& error_rate_tool,
                    const Rotation3& stylus_in_leader_base, const Rotation3& tcp_in_stylus_view,
                    const HfcParams& params);

/// f if |f| < f_max, else f_max f / |f|.
Vec3 saturate(const Vec3& f, double f_max);

/// f if contact_force_norm > f_db (strict), else zero.
Vec3 dead_band(const Vec3& f, double contact_force_norm, double f_db);

/// Tool-to-stylus rotation including the viewing-angle roll; the transpose
/// of the mapping used for motion.
Rotation3 force_view_mapping(double phi, const FrameConfig& frames);

class HapticFeedbackController {
 public:
  struct Output {
    Vec3 force = Vec3::Zero();  // after saturation and dead-band
    Vec3 raw = Vec3::Zero();
    Vec3 error_rate = Vec3::Zero();
    bool saturated = false;
    bool gated = false;  // dead-band suppressed the output
  };

  /// rate_window: samples in the moving average applied to the finite
  /// difference of the tracking error.
  HapticFeedbackController(const HfcParams& params, double control_period,
                           std::size_t rate_window = 4);

  /// The first tick after reset() uses a zero error rate.
  Output tick(const Vec3& tracking_error, double contact_force_norm,
              const Rotation3& stylus_in_leader_base, double phi, const FrameConfig& frames);

  void reset();
  void set_params(const HfcParams& params);
  const HfcParams& params() const { return params_; }

 private:
  HfcParams params_;
  double period_;
  VectorWindow rate_filter_;
  Vec3 prev_error_ = Vec3::Zero();
  bool has_prev_ = false;
};

}  // namespace teleop
