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
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "support/random.hpp"
#include "teleop/eyehand_assessment.hpp"

namespace teleop {
namespace {

using testing::Rng;

constexpr double kPi = std::numbers::pi;
constexpr double kTs = 0.008;

Rotation3 rz(double a) { return elementary_rotation(Axis::kZ, a); }
Rotation3 rx(double a) { return elementary_rotation(Axis::kX, a); }

TEST(EngagementTarget, IdentityFrames) {
  const FrameConfig cfg;
  const Transform t = engagement_target(Transform{}, {0.4, 0.1, 0.2}, cfg);
  EXPECT_LT((t.rotation.matrix() - Mat3::Identity()).norm(), 1e-15);
  EXPECT_EQ(t.translation, Vec3(0.4, 0.1, 0.2));
}

TEST(EngagementTarget, FollowsStylusRotation) {
  const FrameConfig cfg;
  const Transform t = engagement_target(Transform{rz(0.7), {1, 2, 3}}, {0.4, 0, 0}, cfg);
  EXPECT_LT((t.rotation.matrix() - rz(0.7).matrix()).norm(), 1e-15);
  EXPECT_EQ(t.translation, Vec3(0.4, 0, 0));
}

TEST(EngagementTarget, ChainsFixedRotations) {
  Rng rng(31);
  FrameConfig cfg;
  cfg.leader_base_in_robot_base = rng.rotation();
  cfg.tcp_in_stylus = rng.rotation();
  const Rotation3 stylus = rng.rotation();
  const Transform t = engagement_target(Transform{stylus, Vec3::Zero()}, Vec3::Zero(), cfg);
  const Mat3 expected =
      cfg.leader_base_in_robot_base.matrix() * stylus.matrix() * cfg.tcp_in_stylus.matrix();
  EXPECT_LT((t.rotation.matrix() - expected).norm(), 1e-14);
}

TEST(EngagementAligned, Examples) {
  EXPECT_TRUE(engagement_aligned(rz(0.3), rz(0.3), 0.02));
  EXPECT_FALSE(engagement_aligned(Rotation3::identity(), rx(0.1), 0.05));
  // Strict at the boundary.
  EXPECT_FALSE(engagement_aligned(Rotation3::identity(), rx(0.05), 0.05));
  EXPECT_TRUE(engagement_aligned(Rotation3::identity(), rx(0.05), 0.05 + 1e-9));
}

TEST(HdTwist, NoMotion) {
  const FilteredPose p{{0.1, 0.2, 0.3}, UnitQuaternion(0.9, 0.1, 0.2, 0.3)};
  const Twist v = hd_twist(p, p, kTs);
  EXPECT_EQ(v.linear, Vec3::Zero());
  EXPECT_LT(v.angular.norm(), 1e-14);
}

TEST(HdTwist, LinearDifference) {
  const FilteredPose a;
  FilteredPose b;
  b.position = {0.001, 0, 0};
  EXPECT_LT((hd_twist(a, b, kTs).linear - Vec3(0.125, 0, 0)).norm(), 1e-15);
}

TEST(HdTwist, AngularFromAxisAngle) {
  FilteredPose a;
  FilteredPose b;
  b.orientation = rz(0.01).to_quaternion();
  EXPECT_LT((hd_twist(a, b, kTs).angular - Vec3(0, 0, 1.25)).norm(), 1e-12);
}

TEST(HdTwist, AngularIsExpressedInLeaderBase) {
  // Body rotation about the stylus z axis while the stylus points along
  // -y of the base (rx(pi/2) maps z to -y).
  FilteredPose a;
  a.orientation = rx(kPi / 2).to_quaternion();
  FilteredPose b;
  b.orientation = a.orientation * rz(0.01).to_quaternion();
  EXPECT_LT((hd_twist(a, b, kTs).angular - Vec3(0, -1.25, 0)).norm(), 1e-12);
}

TEST(HdTwist, RejectsBadPeriod) {
  EXPECT_THROW(hd_twist({}, {}, 0.0), std::invalid_argument);
}

TEST(ViewingAngle, Examples) {
  Rng rng(32);
  const Rotation3 ref = rng.rotation();
  EXPECT_NEAR(viewing_angle(ref, ref).phi, 0.0, 1e-12);
  EXPECT_NEAR(viewing_angle(ref * rz(-kPi / 2), ref).phi, -kPi / 2, 1e-12);
  EXPECT_NEAR(viewing_angle(ref * rx(0.2) * rz(0.7), ref).phi, 0.7, 1e-9);
}

TEST(ViewingAngle, DegenerateIsFlagged) {
  const ViewingAngle va = viewing_angle(rx(kPi), Rotation3::identity());
  EXPECT_TRUE(va.degenerate);
}

TEST(MapTwist, IdentityPassThrough) {
  const FrameConfig cfg;
  Twist v;
  v.linear = {0.1, -0.2, 0.3};
  v.angular = {0.4, 0.5, -0.6};
  const Twist out = map_twist(v, FilteredPose{}, Rotation3::identity(), 0.0,
                              ScalingMatrix(Vec3::Ones()), cfg);
  EXPECT_LT((out.as_vector() - v.as_vector()).norm(), 1e-15);
}

TEST(MapTwist, ScalesTranslationOnly) {
  const FrameConfig cfg;
  Twist v;
  v.linear = {1, 1, 1};
  v.angular = {1, 1, 1};
  const Twist out = map_twist(v, FilteredPose{}, Rotation3::identity(), 0.0,
                              ScalingMatrix(Vec3(0.5, 0.25, 2.0)), cfg);
  EXPECT_LT((out.linear - Vec3(0.5, 0.25, 2.0)).norm(), 1e-15);
  EXPECT_LT((out.angular - Vec3(1, 1, 1)).norm(), 1e-15);
}

TEST(MapTwist, QuarterRollSendsLeaderXToRobotZ) {
  // Frames and orientations of the free-space assessment after the roll.
  const EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  const FrameConfig& frames = c.pipeline.ehcc.frames;
  const UnitQuaternion stylus0 = c.stylus_start;
  const Rotation3 reference =
      engagement_target(Pose{Vec3::Zero(), stylus0}.to_transform(), Vec3::Zero(), frames).rotation;
  const Rotation3 measured = reference * rz(-kPi / 2);
  FilteredPose stylus;
  stylus.orientation = stylus0 * rz(-kPi / 2).to_quaternion();
  const double phi = viewing_angle(measured, reference).phi;
  ASSERT_NEAR(phi, -kPi / 2, 1e-12);

  Twist v;
  v.linear = {0.01, 0, 0};
  const Twist out = map_twist(v, stylus, measured, phi, c.pipeline.ehcc.scaling, frames);
  EXPECT_GT(std::abs(out.linear.z()), 0.999 * out.linear.norm());

  // Without compensation the same motion stays along x.
  const Twist plain = map_twist(v, stylus, measured, 0.0, c.pipeline.ehcc.scaling, frames);
  EXPECT_GT(std::abs(plain.linear.x()), 0.999 * plain.linear.norm());
}

TEST(ViewMapping, RollFormsAgreeWhenZIsPreserved) {
  Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    FrameConfig cfg;
    cfg.stylus_in_tcp = rz(rng.uniform(-kPi, kPi));
    ASSERT_TRUE(cfg.z_axis_preserved());
    const double phi = rng.uniform(-kPi, kPi);
    EXPECT_LT((view_mapping_tcp_roll(phi, cfg).matrix() - view_mapping_stylus_roll(phi, cfg).matrix())
                  .norm(),
              1e-14);
  }
}

TEST(ViewMapping, RollFormsDifferOtherwise) {
  FrameConfig cfg;
  cfg.stylus_in_tcp = rx(0.5);
  EXPECT_FALSE(cfg.z_axis_preserved());
  EXPECT_GT((view_mapping_tcp_roll(0.8, cfg).matrix() - view_mapping_stylus_roll(0.8, cfg).matrix())
                .norm(),
            0.1);
}

TEST(IntegrateReference, ZeroTwistKeepsPosition) {
  EhccState s;
  s.prev_desired = {rz(0.3), {1, 2, 3}};
  const Transform t = integrate_reference(s, Twist{}, rx(0.2));
  EXPECT_EQ(t.translation, Vec3(1, 2, 3));
  EXPECT_LT((t.rotation.matrix() - rx(0.2).matrix()).norm(), 1e-15);
}

TEST(IntegrateReference, AngularStep) {
  EhccState s;
  Twist v;
  v.angular = {0, 0, 1.25};
  const Transform t = integrate_reference(s, v, Rotation3::identity());
  EXPECT_LT((t.rotation.matrix() - testing::axis_angle_matrix(Vec3::UnitZ(), 0.01)).norm(), 1e-15);
}

TEST(IntegrateReference, LinearStep) {
  EhccState s;
  Twist v;
  v.linear = {0.125, 0, 0};
  const Transform t = integrate_reference(s, v, Rotation3::identity());
  EXPECT_NEAR(t.translation.x(), 0.001, 1e-18);
  EXPECT_EQ(s.prev_desired.translation, t.translation);
}

TEST(IntegrateReference, AngularStepInRotatedFrame) {
  Rng rng(34);
  const Rotation3 measured = rng.rotation();
  const Vec3 w = rng.vec3(-2, 2);
  EhccState s;
  Twist v;
  v.angular = w;
  const Transform t = integrate_reference(s, v, measured);
  // The base-frame rotation of angle |w| T_s about w, applied on the left.
  const Mat3 expected = testing::axis_angle_matrix(w, w.norm() * kTs) * measured.matrix();
  EXPECT_LT((t.rotation.matrix() - expected).norm(), 1e-14);
}

TEST(Debouncer, EngagesAfterHold) {
  EngagementDebouncer d(0.5);
  d.start(0.0);
  for (int k = 0; k < 62; ++k) {
    EXPECT_EQ(d.update(true, k * kTs), EngagementDebouncer::Status::kAligning) << k;
  }
  EXPECT_EQ(d.update(true, 62.5 * kTs), EngagementDebouncer::Status::kEngaged);
}

TEST(Debouncer, JitterRestartsTheHold) {
  // aligned for 0.4 s, one misaligned tick, then 0.5 s aligned.
  EngagementDebouncer d(0.5);
  d.start(0.0);
  int k = 0;
  for (; k < 50; ++k) ASSERT_EQ(d.update(true, k * kTs), EngagementDebouncer::Status::kAligning);
  ASSERT_EQ(d.update(false, k * kTs), EngagementDebouncer::Status::kAligning);
  ++k;
  const int restart = k;
  EngagementDebouncer::Status s = EngagementDebouncer::Status::kAligning;
  while (s == EngagementDebouncer::Status::kAligning) s = d.update(true, (k++) * kTs);
  EXPECT_EQ(s, EngagementDebouncer::Status::kEngaged);
  const double held = (k - 1 - restart) * kTs;
  EXPECT_GE(held, 0.5);
  EXPECT_LT(held, 0.5 + kTs);
}

TEST(Debouncer, TimesOut) {
  EngagementDebouncer d(0.5, 2.0);
  d.start(1.0);
  EngagementDebouncer::Status s = EngagementDebouncer::Status::kAligning;
  int k = 0;
  while (s == EngagementDebouncer::Status::kAligning && k < 1000) {
    s = d.update(k % 10 != 0, 1.0 + (k++) * kTs);
  }
  EXPECT_EQ(s, EngagementDebouncer::Status::kTimedOut);
  EXPECT_NEAR((k - 1) * kTs, 2.0, 1e-9);
}

TEST(Debouncer, RejectsBadArguments) {
  EXPECT_THROW(EngagementDebouncer(-1.0), std::invalid_argument);
  EXPECT_THROW(EngagementDebouncer(0.5, 0.0), std::invalid_argument);
}

class ControllerFixture : public ::testing::Test {
 protected:
  void engage(EyeHandController& c, const Pose& stylus) {
    for (int k = 0; k < 32; ++k) c.observe(stylus);
    c.engage(tcp_);
  }
  Pose tcp_{{0.4, 0.0, 0.3}, UnitQuaternion::identity()};
};

TEST_F(ControllerFixture, StepBeforeEngageThrows) {
  EyeHandController c{EhccParams{}};
  EXPECT_THROW(c.step(Pose{}, tcp_), std::logic_error);
}

TEST_F(ControllerFixture, StillStylusGivesConstantDesired) {
  EyeHandController c{EhccParams{}};
  const Pose stylus{{0.1, 0.1, 0.1}, UnitQuaternion::identity()};
  engage(c, stylus);
  for (int k = 0; k < 200; ++k) {
    const EyeHandController::Step s = c.step(stylus, tcp_);
    EXPECT_EQ(s.desired.position, tcp_.position);
    EXPECT_LT(angular_distance(s.desired.orientation, tcp_.orientation), 1e-7);
  }
}

TEST_F(ControllerFixture, SquarePathIsScaled) {
  EhccParams p;
  p.scaling = ScalingMatrix(Vec3::Constant(0.5));
  EyeHandController c(p);
  const Pose start{{0.0, 0.0, 0.0}, UnitQuaternion::identity()};
  engage(c, start);
  // 2 cm square in the x-y plane, 100 ticks per side, then 32 ticks of
  // rest so the filter window settles.
  const Vec3 corners[] = {{0, 0, 0}, {0.02, 0, 0}, {0.02, 0.02, 0}, {0, 0.02, 0}, {0, 0, 0}};
  Pose stylus = start;
  EyeHandController::Step s;
  for (int side = 0; side < 4; ++side) {
    for (int k = 1; k <= 100; ++k) {
      stylus.position = corners[side] + (corners[side + 1] - corners[side]) * (k / 100.0);
      s = c.step(stylus, tcp_);
    }
    for (int k = 0; k < 32; ++k) s = c.step(stylus, tcp_);
    const Vec3 expected = tcp_.position + 0.5 * corners[side + 1];
    EXPECT_LT((s.desired.position - expected).norm(), 1e-12) << "corner " << side + 1;
  }
}

}  // namespace
}  // namespace teleop
