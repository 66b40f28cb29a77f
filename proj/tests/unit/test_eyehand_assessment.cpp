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


#include "teleop/eyehand_assessment.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "teleop/config.hpp"

namespace teleop {
namespace {

TEST(EyeHandAssessment, DefaultsPass) {
  const EyeHandReport r = run_eyehand_assessment(EyeHandAssessmentConfig::defaults());
  ASSERT_EQ(r.phases.size(), 3u);
  EXPECT_TRUE(r.pass) << ::testing::PrintToString(r.failures);
  EXPECT_EQ(r.phases[0].dominant_axis, 0);
  EXPECT_EQ(r.phases[2].dominant_axis, 2);
  // Cross-axis leakage below 2% of the dominant displacement.
  EXPECT_GE(r.phases[0].fraction, 0.98);
  EXPECT_GE(r.phases[2].fraction, 0.98);
  EXPECT_NEAR(r.final_phi, -std::numbers::pi / 2, 0.02);
  EXPECT_NEAR(r.phases[1].rotation, std::numbers::pi / 2, 0.05);
  EXPECT_EQ(r.log.size(), 3750u);
}

TEST(EyeHandAssessment, DisplacementMatchesScaling) {
  const EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  const EyeHandReport r = run_eyehand_assessment(c);
  const double expected = c.translation * c.pipeline.ehcc.scaling.translational_gains().x();
  EXPECT_NEAR(r.phases[0].displacement.norm(), expected, 0.02 * expected);
  EXPECT_NEAR(r.phases[2].displacement.norm(), expected, 0.02 * expected);
}

TEST(EyeHandAssessment, WrongExpectationFails) {
  EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  c.expected_axis_phase3 = 0;
  const EyeHandReport r = run_eyehand_assessment(c);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.failures.empty());
}

TEST(EyeHandAssessment, PositiveRollSendsXToOppositeZ) {
  EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  c.roll = std::numbers::pi / 2;
  const EyeHandReport pos = run_eyehand_assessment(c);
  const EyeHandReport neg = run_eyehand_assessment(EyeHandAssessmentConfig::defaults());
  EXPECT_TRUE(pos.pass);
  EXPECT_LT(pos.phases[2].displacement.z() * neg.phases[2].displacement.z(), 0.0);
}

TEST(EyeHandAssessment, ConfigRoundTrip) {
  const EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  const nlohmann::json j = to_json(c);
  EXPECT_EQ(to_json(parse_eyehand_config(j)), j);
  nlohmann::json bad = j;
  bad["min_fraction"] = 1.5;
  EXPECT_THROW(parse_eyehand_config(bad), ConfigError);
}

TEST(EyeHandAssessment, ScriptHasThreePhases) {
  const EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  const LeaderScript s = eyehand_script(c);
  EXPECT_NEAR(s.end_time(), 3 * c.phase_duration, 1e-12);
  const Pose start = leader_sample(s, 0.0);
  const Pose mid = leader_sample(s, 1.5 * c.phase_duration);
  const Pose end = leader_sample(s, 3 * c.phase_duration);
  EXPECT_NEAR((end.position - start.position).norm(), 2 * c.translation, 1e-3);
  EXPECT_NEAR(angular_distance(start.orientation, end.orientation), std::abs(c.roll), 1e-9);
  EXPECT_GT((mid.position - start.position).x(), 0.5 * c.translation);
}

}  // namespace
}  // namespace teleop
