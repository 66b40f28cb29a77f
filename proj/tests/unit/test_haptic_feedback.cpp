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
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "support/random.hpp"

namespace teleop {
namespace {

using testing::Rng;

constexpr double kTs = 0.008;

HfcParams spring_only() {
  HfcParams p;
  p.damping = Vec3::Zero();
  return p;
}

TEST(FeedbackForce, ZeroError) {
  EXPECT_EQ(feedback_force(Vec3::Zero(), Vec3::Zero(), Rotation3::identity(), Rotation3::identity(),
                           HfcParams{}),
            Vec3::Zero());
}

TEST(FeedbackForce, LinearSpring) {
  const Vec3 f = feedback_force({0.005, 0, 0}, Vec3::Zero(), Rotation3::identity(),
                                Rotation3::identity(), spring_only());
  EXPECT_LT((f - Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST(FeedbackForce, RollRotatesAndPreservesNorm) {
  const FrameConfig frames;
  const double phi = -std::numbers::pi / 2;
  const Vec3 f = feedback_force({0.005, 0, 0}, Vec3::Zero(), Rotation3::identity(),
                                force_view_mapping(phi, frames), spring_only());
  EXPECT_NEAR(f.norm(), 1.0, 1e-15);
  // Oracle: the motion mapping sends stylus-frame e to tool-frame M e, so a
  // tool-frame error e_t is felt as M^T e_t.
  const Vec3 expected =
      view_mapping_tcp_roll(phi, frames).matrix().transpose() * Vec3(1, 0, 0);
  EXPECT_LT((f - expected).norm(), 1e-15);
  EXPECT_LT((f - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(FeedbackForce, RandomRotationsAreIsometries) {
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const Vec3 e = rng.vec3(-0.01, 0.01);
    const Vec3 f = feedback_force(e, Vec3::Zero(), rng.rotation(), rng.rotation(), spring_only());
    EXPECT_NEAR(f.norm(), 200.0 * e.norm(), 1e-12);
  }
}

TEST(Saturate, Examples) {
  EXPECT_EQ(saturate({1, 0, 0}, 3.3), Vec3(1, 0, 0));
  EXPECT_LT((saturate({5, 0, 0}, 3.3) - Vec3(3.3, 0, 0)).norm(), 1e-15);
  EXPECT_THROW(saturate({1, 0, 0}, 0.0), std::invalid_argument);
}

TEST(Saturate, PreservesDirection) {
  Rng rng(52);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 f = rng.unit_vector() * rng.uniform(3.4, 100.0);
    const Vec3 s = saturate(f, 3.3);
    EXPECT_NEAR(s.norm(), 3.3, 1e-12);
    EXPECT_LT((s.normalized() - f.normalized()).norm(), 1e-12);
  }
}

TEST(DeadBand, Examples) {
  const Vec3 f(0.3, 0.2, 0.1);
  EXPECT_EQ(dead_band(f, 0.05, 0.1), Vec3::Zero());
  EXPECT_EQ(dead_band(f, 0.5, 0.1), f);
  EXPECT_EQ(dead_band(f, 0.1, 0.1), Vec3::Zero());
}

TEST(HfcController, FirstTickHasNoRate) {
  HapticFeedbackController c(HfcParams{}, kTs);
  const auto out = c.tick({0.001, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  EXPECT_EQ(out.error_rate, Vec3::Zero());
  EXPECT_LT((out.force - Vec3(0.2, 0, 0)).norm(), 1e-15);
  EXPECT_FALSE(out.gated);
}

TEST(HfcController, RateIsFilteredDifference) {
  HfcParams p;
  p.stiffness = Vec3::Zero();
  p.damping = Vec3::Ones();
  HapticFeedbackController c(p, kTs, 4);
  c.tick(Vec3::Zero(), 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  // Ramp of 0.8 mm per tick: difference quotient 0.1 m/s from tick 1.
  HapticFeedbackController::Output out;
  for (int k = 1; k <= 3; ++k) {
    out = c.tick({0.0008 * k, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  }
  // Window: {0, 0.1, 0.1, 0.1}.
  EXPECT_NEAR(out.error_rate.x(), 0.075, 1e-12);
  out = c.tick({0.0008 * 4, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  EXPECT_NEAR(out.error_rate.x(), 0.1, 1e-12);
}

TEST(HfcController, GatedBelowDeadBand) {
  HapticFeedbackController c(HfcParams{}, kTs);
  const auto out = c.tick({0.004, 0, 0}, 0.05, Rotation3::identity(), 0.0, FrameConfig{});
  EXPECT_TRUE(out.gated);
  EXPECT_EQ(out.force, Vec3::Zero());
  EXPECT_GT(out.raw.norm(), 0.0);
}

TEST(HfcController, SaturationFlag) {
  HapticFeedbackController c(HfcParams{}, kTs);
  const auto out = c.tick({0.1, 0, 0}, 5.0, Rotation3::identity(), 0.0, FrameConfig{});
  EXPECT_TRUE(out.saturated);
  EXPECT_NEAR(out.force.norm(), 3.3, 1e-12);
}

TEST(HfcController, ResetClearsHistory) {
  HapticFeedbackController c(HfcParams{}, kTs);
  c.tick({0.001, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  c.tick({0.002, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{});
  c.reset();
  EXPECT_EQ(c.tick({0.003, 0, 0}, 1.0, Rotation3::identity(), 0.0, FrameConfig{}).error_rate,
            Vec3::Zero());
}

TEST(HfcParams, Validation) {
  HfcParams p;
  p.max_force = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = HfcParams{};
  p.stiffness.x() = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = HfcParams{};
  p.dead_band = -0.1;
  EXPECT_THROW(HapticFeedbackController(p, kTs), std::invalid_argument);
}

}  // namespace
}  // namespace teleop
