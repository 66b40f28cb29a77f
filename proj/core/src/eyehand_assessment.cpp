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
#include <sstream>

#include "json_util.hpp"
#include "teleop/config.hpp"

namespace teleop {

using nlohmann::json;
using detail::check_keys;
using detail::child;
using detail::number;

EyeHandAssessmentConfig EyeHandAssessmentConfig::defaults() {
  EyeHandAssessmentConfig c;
  c.pipeline.engagement_hold = 0.0;
  const Rotation3 start = elementary_rotation(Axis::kX, -std::numbers::pi / 2.0);
  c.stylus_start = start.to_quaternion();
  c.world.follower.pose.position = Vec3(0.4, 0.0, 0.3);
  c.world.follower.pose.orientation = start.to_quaternion();
  c.tremor = TremorSpec::physiological(7);
  return c;
}

EyeHandAssessmentConfig parse_eyehand_config(const json& j) {
  check_keys(j, "",
             {"seed", "phase_duration", "translation", "roll", "min_fraction", "stylus_start",
              "tremor", "ehcc", "world", "expected_axis_phase1", "expected_axis_phase3"});
  EyeHandAssessmentConfig c = EyeHandAssessmentConfig::defaults();
  std::uint64_t seed = 7;
  if (const json* v = child(j, "seed")) seed = detail::unsigned_integer(*v, "/seed");
  c.tremor.seed = seed;
  const auto positive = [&](const char* key, double* out) {
    if (const json* v = child(j, key)) {
      *out = number(*v, std::string("/") + key);
      if (!(*out > 0.0)) throw ConfigError(std::string("/") + key, "must be > 0");
    }
  };
  positive("phase_duration", &c.phase_duration);
  positive("translation", &c.translation);
  positive("min_fraction", &c.min_fraction);
  if (c.min_fraction > 1.0) throw ConfigError("/min_fraction", "must be <= 1");
  if (const json* v = child(j, "roll")) c.roll = number(*v, "/roll");
  if (const json* v = child(j, "stylus_start")) {
    c.stylus_start = parse_quaternion(*v, "/stylus_start");
  }
  if (const json* v = child(j, "tremor")) c.tremor = parse_tremor(*v, "/tremor", seed);
  if (const json* v = child(j, "ehcc")) c.pipeline.ehcc = parse_ehcc(*v, "/ehcc", c.pipeline.ehcc);
  if (const json* v = child(j, "world")) c.world = parse_world(*v, "/world", seed);
  for (const auto& [key, out] : {std::pair{"expected_axis_phase1", &c.expected_axis_phase1},
                                 std::pair{"expected_axis_phase3", &c.expected_axis_phase3}}) {
    if (const json* v = child(j, key)) {
      const double a = number(*v, std::string("/") + key);
      if (a != 0.0 && a != 1.0 && a != 2.0) {
        throw ConfigError(std::string("/") + key, "expected 0, 1 or 2");
      }
      *out = static_cast<int>(a);
    }
  }
  return c;
}

json to_json(const EyeHandAssessmentConfig& c) {
  return {{"seed", c.tremor.seed},
          {"phase_duration", c.phase_duration},
          {"translation", c.translation},
          {"roll", c.roll},
          {"min_fraction", c.min_fraction},
          {"stylus_start", to_json(c.stylus_start)},
          {"tremor", to_json(c.tremor)},
          {"ehcc", to_json(c.pipeline.ehcc)},
          {"world", to_json(c.world)},
          {"expected_axis_phase1", c.expected_axis_phase1},
          {"expected_axis_phase3", c.expected_axis_phase3}};
}

LeaderScript eyehand_script(const EyeHandAssessmentConfig& c) {
  const double T = c.phase_duration;
  const double margin = 0.1 * T;
  const Vec3 p0 = Vec3::Zero();
  const Vec3 p1 = p0 + Vec3(c.translation, 0.0, 0.0);
  const Vec3 p2 = p1 + Vec3(c.translation, 0.0, 0.0);
  const UnitQuaternion q0 = c.stylus_start;
  // Roll about the stylus' own z axis.
  const UnitQuaternion q1 = q0 * elementary_rotation(Axis::kZ, c.roll).to_quaternion();
  LeaderScript s;
  s.tremor = c.tremor;
  s.waypoints = {
      {0.0, {p0, q0}, Interpolation::kLinear},
      {margin, {p0, q0}, Interpolation::kLinear},
      {T - margin, {p1, q0}, Interpolation::kLinear},
      {T + margin, {p1, q0}, Interpolation::kLinear},
      {2 * T - margin, {p1, q1}, Interpolation::kLinear},
      {2 * T + margin, {p1, q1}, Interpolation::kLinear},
      {3 * T - margin, {p2, q1}, Interpolation::kLinear},
      {3 * T, {p2, q1}, Interpolation::kHold},
  };
  return s;
}

EyeHandReport run_eyehand_assessment(const EyeHandAssessmentConfig& c) {
  const LeaderScript script = eyehand_script(c);
  script.validate();
  const double ts = c.pipeline.ehcc.control_period;
  const auto phase_ticks = static_cast<std::size_t>(std::llround(c.phase_duration / ts));

  TeleopPipeline pipeline(c.pipeline, c.world);
  pipeline.request_engagement();
  EyeHandReport report;
  report.log.reserve(3 * phase_ticks);
  for (std::size_t k = 0; k < 3 * phase_ticks; ++k) {
    report.log.push_back(pipeline.tick(leader_sample(script, pipeline.time())));
  }

  const char* names[3] = {"translate", "roll", "translate_rolled"};
  const int expected[3] = {c.expected_axis_phase1, -1, c.expected_axis_phase3};
  Pose start = c.world.follower.pose;
  for (int ph = 0; ph < 3; ++ph) {
    const Pose end = report.log[(ph + 1) * phase_ticks - 1].measured;
    PhaseReport p;
    p.name = names[ph];
    p.expected_axis = expected[ph];
    p.displacement = end.position - start.position;
    p.rotation = angular_distance(start.orientation, end.orientation);
    const double norm = p.displacement.norm();
    Eigen::Index dominant = 0;
    p.displacement.cwiseAbs().maxCoeff(&dominant);
    p.dominant_axis = norm > 0.0 ? static_cast<int>(dominant) : -1;
    if (p.expected_axis >= 0) {
      p.fraction = norm > 0.0 ? std::abs(p.displacement(p.expected_axis)) / norm : 0.0;
      p.pass = p.fraction >= c.min_fraction;
      if (!p.pass) {
        std::ostringstream os;
        os << "phase " << (ph + 1) << " (" << p.name << "): fraction along axis "
           << p.expected_axis << " is " << p.fraction << " < " << c.min_fraction;
        report.failures.push_back(os.str());
      }
    } else {
      // Rolling the stylus about its own axis must turn the camera by the
      // same angle without translating it.
      const double scale = c.translation * c.pipeline.ehcc.scaling.translational_gains().maxCoeff();
      p.pass = std::abs(p.rotation - std::abs(c.roll)) < 0.05 &&
               norm < (1.0 - c.min_fraction) * scale;
      if (!p.pass) {
        std::ostringstream os;
        os << "phase 2 (roll): rotation " << p.rotation << " rad, drift " << norm << " m";
        report.failures.push_back(os.str());
      }
    }
    report.phases.push_back(p);
    start = end;
  }
  report.final_phi = report.log.back().phi;
  report.pass = report.failures.empty();
  return report;
}

json to_json(const EyeHandReport& r) {
  json phases = json::array();
  for (const PhaseReport& p : r.phases) {
    phases.push_back({{"name", p.name},
                      {"displacement", to_json(p.displacement)},
                      {"rotation", p.rotation},
                      {"expected_axis", p.expected_axis},
                      {"dominant_axis", p.dominant_axis},
                      {"fraction", p.fraction},
                      {"pass", p.pass}});
  }
  return {{"phases", phases}, {"final_phi", r.final_phi}, {"pass", r.pass},
          {"failures", r.failures}};
}

}  // namespace teleop
