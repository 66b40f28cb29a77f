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

#include "teleop/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "json_util.hpp"

namespace teleop {

using nlohmann::json;
using detail::check_keys;
using detail::child;
using detail::number;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message),
      path_(std::move(path)) {}

namespace {

template <int N>
Eigen::Matrix<double, N, 1> parse_fixed(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(path, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    v(i) = number(j[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
  }
  return v;
}

void require_positive(const Vec3& v, const std::string& path, bool allow_zero) {
  for (int i = 0; i < 3; ++i) {
    if (allow_zero ? !(v(i) >= 0.0) : !(v(i) > 0.0)) {
      throw ConfigError(path + "/" + std::to_string(i),
                        allow_zero ? "must be >= 0" : "must be > 0");
    }
  }
}

}  // namespace

Vec3 parse_vec3(const json& j, const std::string& path) { return parse_fixed<3>(j, path); }

Vec6 parse_vec6(const json& j, const std::string& path) {
  if (j.is_number()) {
    return Vec6::Constant(number(j, path));
  }
  return parse_fixed<6>(j, path);
}

UnitQuaternion parse_quaternion(const json& j, const std::string& path) {
  const Vec4 c = parse_fixed<4>(j, path);
  if (!(c.norm() > 1e-12)) {
    throw ConfigError(path, "quaternion must be non-zero");
  }
  return UnitQuaternion::from_coeffs(c);
}

Pose parse_pose(const json& j, const std::string& path) {
  check_keys(j, path, {"position", "orientation"});
  Pose p;
  if (const json* v = child(j, "position")) p.position = parse_vec3(*v, path + "/position");
  if (const json* v = child(j, "orientation")) {
    p.orientation = parse_quaternion(*v, path + "/orientation");
  }
  return p;
}

EhccParams parse_ehcc(const json& j, const std::string& path, const EhccParams& base) {
  check_keys(j, path, {"pose_window", "scaling", "engagement_tolerance", "frames"});
  EhccParams p = base;
  if (const json* v = child(j, "pose_window")) {
    const double n = number(*v, path + "/pose_window");
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
      throw ConfigError(path + "/pose_window", "must be an integer in [1, 1e6]");
    }
    p.pose_window = static_cast<std::size_t>(n);
  }
  if (const json* v = child(j, "scaling")) {
    const std::string sp = path + "/scaling";
    const Vec3 g = v->is_number() ? Vec3::Constant(number(*v, sp)) : parse_vec3(*v, sp);
    require_positive(g, sp, false);
    p.scaling = ScalingMatrix(g);
  }
  if (const json* v = child(j, "engagement_tolerance")) {
    p.engagement_tolerance = number(*v, path + "/engagement_tolerance");
    if (!(p.engagement_tolerance > 0.0)) {
      throw ConfigError(path + "/engagement_tolerance", "must be > 0");
    }
  }
  if (const json* f = child(j, "frames")) {
    const std::string fp = path + "/frames";
    check_keys(*f, fp, {"leader_base_in_robot_base", "tcp_in_stylus", "stylus_in_tcp"});
    if (const json* v = child(*f, "leader_base_in_robot_base")) {
      p.frames.leader_base_in_robot_base =
          Rotation3::from_quaternion(parse_quaternion(*v, fp + "/leader_base_in_robot_base"));
    }
    if (const json* v = child(*f, "tcp_in_stylus")) {
      p.frames.tcp_in_stylus =
          Rotation3::from_quaternion(parse_quaternion(*v, fp + "/tcp_in_stylus"));
      p.frames.stylus_in_tcp = p.frames.tcp_in_stylus.transpose();
    }
    if (const json* v = child(*f, "stylus_in_tcp")) {
      p.frames.stylus_in_tcp =
          Rotation3::from_quaternion(parse_quaternion(*v, fp + "/stylus_in_tcp"));
    }
  }
  return p;
}

AdmittanceParams parse_admittance(const json& j, const std::string& path,
                                  const AdmittanceParams& base) {
  check_keys(j, path, {"mass", "stiffness", "damping"});
  AdmittanceParams p = base;
  if (const json* v = child(j, "mass")) p.mass = parse_vec6(*v, path + "/mass");
  if (const json* v = child(j, "stiffness")) p.stiffness = parse_vec6(*v, path + "/stiffness");
  if (const json* v = child(j, "damping")) {
    p.damping = parse_vec6(*v, path + "/damping");
  } else {
    p.damping = AdmittanceParams::critically_damped(p.mass, p.stiffness).damping;
  }
  for (const auto& [key, v] : {std::pair<const char*, const Vec6*>{"mass", &p.mass},
                               {"stiffness", &p.stiffness},
                               {"damping", &p.damping}}) {
    if (!(v->array() > 0.0).all()) {
      throw ConfigError(path + "/" + key, "entries must be > 0");
    }
  }
  return p;
}

SafetyConfig parse_safety(const json& j, const std::string& path, const SafetyConfig& base,
                          EmergencyPolicy* policy) {
  check_keys(j, path,
             {"force_scaling_gain", "emergency_threshold", "emergency_release",
              "max_translation_deviation", "max_rotation_deviation", "emergency_policy"});
  SafetyConfig s = base;
  const auto read = [&](const char* key, double* out) {
    if (const json* v = child(j, key)) {
      if (v->is_null()) {
        *out = std::numeric_limits<double>::infinity();
      } else {
        *out = number(*v, path + "/" + key);
      }
    }
  };
  read("force_scaling_gain", &s.force_scaling_gain);
  const double old_threshold = s.emergency_threshold;
  read("emergency_threshold", &s.emergency_threshold);
  if (s.emergency_threshold != old_threshold && !child(j, "emergency_release")) {
    s.emergency_release = 0.8 * s.emergency_threshold;
  }
  read("emergency_release", &s.emergency_release);
  read("max_translation_deviation", &s.max_translation_deviation);
  read("max_rotation_deviation", &s.max_rotation_deviation);
  if (const json* v = child(j, "emergency_policy")) {
    if (!v->is_string() || (*v != "comply" && *v != "hold")) {
      throw ConfigError(path + "/emergency_policy", "expected \"comply\" or \"hold\"");
    }
    if (policy != nullptr) {
      *policy = *v == "hold" ? EmergencyPolicy::kHoldMeasured : EmergencyPolicy::kComplyFromMeasured;
    }
  }
  if (!(s.force_scaling_gain >= 0.0) || !std::isfinite(s.force_scaling_gain)) {
    throw ConfigError(path + "/force_scaling_gain", "must be finite and >= 0");
  }
  for (const auto& [key, value] :
       {std::pair{"emergency_threshold", s.emergency_threshold},
        std::pair{"emergency_release", s.emergency_release},
        std::pair{"max_translation_deviation", s.max_translation_deviation},
        std::pair{"max_rotation_deviation", s.max_rotation_deviation}}) {
    if (!(value > 0.0)) {
      throw ConfigError(path + "/" + key, "must be > 0");
    }
  }
  if (std::isfinite(s.emergency_threshold) && !(s.emergency_release < s.emergency_threshold)) {
    throw ConfigError(path + "/emergency_release", "must be below emergency_threshold");
  }
  return s;
}

HfcParams parse_hfc(const json& j, const std::string& path, const HfcParams& base) {
  check_keys(j, path, {"stiffness", "damping", "max_force", "dead_band"});
  HfcParams p = base;
  const auto vec = [&](const char* key, Vec3* out) {
    if (const json* v = child(j, key)) {
      const std::string kp = path + "/" + key;
      *out = v->is_number() ? Vec3::Constant(number(*v, kp)) : parse_vec3(*v, kp);
      require_positive(*out, kp, true);
    }
  };
  vec("stiffness", &p.stiffness);
  vec("damping", &p.damping);
  if (const json* v = child(j, "max_force")) {
    p.max_force = number(*v, path + "/max_force");
    if (!(p.max_force > 0.0)) throw ConfigError(path + "/max_force", "must be > 0");
  }
  if (const json* v = child(j, "dead_band")) {
    p.dead_band = number(*v, path + "/dead_band");
    if (!(p.dead_band >= 0.0)) throw ConfigError(path + "/dead_band", "must be >= 0");
  }
  return p;
}

TremorSpec parse_tremor(const json& j, const std::string& path, std::uint64_t seed) {
  if (j.is_string()) {
    if (j == "none") return TremorSpec::none();
    if (j == "physiological") return TremorSpec::physiological(seed);
    throw ConfigError(path, "expected \"none\", \"physiological\" or an object");
  }
  check_keys(j, path, {"components", "noise_std", "seed"});
  TremorSpec t;
  t.seed = seed;
  if (const json* v = child(j, "components")) {
    if (!v->is_array()) throw ConfigError(path + "/components", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string cp = path + "/components/" + std::to_string(i);
      const json& c = (*v)[i];
      check_keys(c, cp, {"amplitude", "frequency", "phase"});
      TremorComponent comp;
      comp.amplitude = number(detail::require(c, "amplitude", cp), cp + "/amplitude");
      comp.frequency_hz = number(detail::require(c, "frequency", cp), cp + "/frequency");
      if (const json* ph = child(c, "phase")) comp.phase = number(*ph, cp + "/phase");
      if (!(comp.amplitude >= 0.0)) throw ConfigError(cp + "/amplitude", "must be >= 0");
      t.components.push_back(comp);
    }
  }
  if (const json* v = child(j, "noise_std")) {
    t.noise_std = number(*v, path + "/noise_std");
    if (!(t.noise_std >= 0.0)) throw ConfigError(path + "/noise_std", "must be >= 0");
  }
  if (const json* v = child(j, "seed")) t.seed = detail::unsigned_integer(*v, path + "/seed");
  return t;
}

LeaderScript parse_script(const json& j, const std::string& path, std::uint64_t seed) {
  check_keys(j, path, {"waypoints", "tremor"});
  LeaderScript s;
  const json& w = detail::require(j, "waypoints", path);
  if (!w.is_array() || w.empty()) {
    throw ConfigError(path + "/waypoints", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string wp = path + "/waypoints/" + std::to_string(i);
    check_keys(w[i], wp, {"t", "position", "orientation", "mode"});
    Waypoint p;
    p.time = number(detail::require(w[i], "t", wp), wp + "/t");
    p.pose.position = parse_vec3(detail::require(w[i], "position", wp), wp + "/position");
    if (const json* q = child(w[i], "orientation")) {
      p.pose.orientation = parse_quaternion(*q, wp + "/orientation");
    }
    if (const json* m = child(w[i], "mode")) {
      if (*m == "linear") {
        p.mode = Interpolation::kLinear;
      } else if (*m == "hold") {
        p.mode = Interpolation::kHold;
      } else {
        throw ConfigError(wp + "/mode", "expected \"linear\" or \"hold\"");
      }
    }
    if (i > 0 && !(p.time > s.waypoints.back().time)) {
      throw ConfigError(wp + "/t", "waypoint times must be strictly increasing");
    }
    s.waypoints.push_back(p);
  }
  if (const json* t = child(j, "tremor")) s.tremor = parse_tremor(*t, path + "/tremor", seed);
  return s;
}

ContactSurface parse_surface(const json& j, const std::string& path) {
  check_keys(j, path, {"type", "point", "normal", "center", "radius", "stiffness", "damping"});
  ContactSurface s;
  const json& type = detail::require(j, "type", path);
  if (type == "plane") {
    Plane p;
    p.point = parse_vec3(detail::require(j, "point", path), path + "/point");
    const Vec3 n = parse_vec3(detail::require(j, "normal", path), path + "/normal");
    if (!(n.norm() > 1e-12)) throw ConfigError(path + "/normal", "must be non-zero");
    p.normal = n.normalized();
    s.geometry = p;
  } else if (type == "sphere") {
    Sphere sp;
    sp.center = parse_vec3(detail::require(j, "center", path), path + "/center");
    sp.radius = number(detail::require(j, "radius", path), path + "/radius");
    if (!(sp.radius > 0.0)) throw ConfigError(path + "/radius", "must be > 0");
    s.geometry = sp;
  } else {
    throw ConfigError(path + "/type", "expected \"plane\" or \"sphere\"");
  }
  s.stiffness = number(detail::require(j, "stiffness", path), path + "/stiffness");
  if (!(s.stiffness > 0.0)) throw ConfigError(path + "/stiffness", "must be > 0");
  if (const json* v = child(j, "damping")) {
    s.damping = number(*v, path + "/damping");
    if (!(s.damping >= 0.0)) throw ConfigError(path + "/damping", "must be >= 0");
  }
  return s;
}

WorldConfig parse_world(const json& j, const std::string& path, std::uint64_t seed) {
  check_keys(j, path, {"follower", "surfaces", "sensor_noise_std", "sensor_seed"});
  WorldConfig w;
  w.sensor_seed = splitmix64(seed ^ 0x5e45u);
  if (const json* f = child(j, "follower")) {
    const std::string fp = path + "/follower";
    check_keys(*f, fp, {"pose", "max_linear_speed", "max_angular_speed"});
    if (const json* p = child(*f, "pose")) w.follower.pose = parse_pose(*p, fp + "/pose");
    if (const json* v = child(*f, "max_linear_speed")) {
      w.follower.max_linear_speed = number(*v, fp + "/max_linear_speed");
      if (!(w.follower.max_linear_speed > 0.0)) {
        throw ConfigError(fp + "/max_linear_speed", "must be > 0");
      }
    }
    if (const json* v = child(*f, "max_angular_speed")) {
      w.follower.max_angular_speed = number(*v, fp + "/max_angular_speed");
      if (!(w.follower.max_angular_speed > 0.0)) {
        throw ConfigError(fp + "/max_angular_speed", "must be > 0");
      }
    }
  }
  if (const json* s = child(j, "surfaces")) {
    if (!s->is_array()) throw ConfigError(path + "/surfaces", "expected an array");
    for (std::size_t i = 0; i < s->size(); ++i) {
      w.surfaces.push_back(parse_surface((*s)[i], path + "/surfaces/" + std::to_string(i)));
    }
  }
  if (const json* v = child(j, "sensor_noise_std")) {
    w.sensor_noise_std = number(*v, path + "/sensor_noise_std");
    if (!(w.sensor_noise_std >= 0.0)) throw ConfigError(path + "/sensor_noise_std", "must be >= 0");
  }
  if (const json* v = child(j, "sensor_seed")) {
    w.sensor_seed = detail::unsigned_integer(*v, path + "/sensor_seed");
  }
  return w;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Vec6& v) {
  json a = json::array();
  for (int i = 0; i < 6; ++i) a.push_back(v(i));
  return a;
}

json to_json(const UnitQuaternion& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json to_json(const Pose& p) {
  return {{"position", to_json(p.position)}, {"orientation", to_json(p.orientation)}};
}

json to_json(const EhccParams& p) {
  return {{"pose_window", p.pose_window},
          {"scaling", to_json(p.scaling.translational_gains())},
          {"engagement_tolerance", p.engagement_tolerance},
          {"frames",
           {{"leader_base_in_robot_base",
             to_json(p.frames.leader_base_in_robot_base.to_quaternion())},
            {"tcp_in_stylus", to_json(p.frames.tcp_in_stylus.to_quaternion())},
            {"stylus_in_tcp", to_json(p.frames.stylus_in_tcp.to_quaternion())}}}};
}

json to_json(const AdmittanceParams& p) {
  return {{"mass", to_json(p.mass)},
          {"stiffness", to_json(p.stiffness)},
          {"damping", to_json(p.damping)}};
}

json to_json(const SafetyConfig& s, EmergencyPolicy policy) {
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"force_scaling_gain", s.force_scaling_gain},
          {"emergency_threshold", num(s.emergency_threshold)},
          {"emergency_release", num(s.emergency_release)},
          {"max_translation_deviation", num(s.max_translation_deviation)},
          {"max_rotation_deviation", num(s.max_rotation_deviation)},
          {"emergency_policy", policy == EmergencyPolicy::kHoldMeasured ? "hold" : "comply"}};
}

json to_json(const HfcParams& p) {
  return {{"stiffness", to_json(p.stiffness)},
          {"damping", to_json(p.damping)},
          {"max_force", p.max_force},
          {"dead_band", p.dead_band}};
}

json to_json(const TremorSpec& t) {
  json comps = json::array();
  for (const TremorComponent& c : t.components) {
    comps.push_back({{"amplitude", c.amplitude}, {"frequency", c.frequency_hz}, {"phase", c.phase}});
  }
  return {{"components", comps}, {"noise_std", t.noise_std}, {"seed", t.seed}};
}

json to_json(const LeaderScript& s) {
  json w = json::array();
  for (const Waypoint& p : s.waypoints) {
    w.push_back({{"t", p.time},
                 {"position", to_json(p.pose.position)},
                 {"orientation", to_json(p.pose.orientation)},
                 {"mode", p.mode == Interpolation::kHold ? "hold" : "linear"}});
  }
  return {{"waypoints", w}, {"tremor", to_json(s.tremor)}};
}

json to_json(const ContactSurface& s) {
  json j;
  if (const auto* p = std::get_if<Plane>(&s.geometry)) {
    j = {{"type", "plane"}, {"point", to_json(p->point)}, {"normal", to_json(p->normal)}};
  } else {
    const Sphere& sp = std::get<Sphere>(s.geometry);
    j = {{"type", "sphere"}, {"center", to_json(sp.center)}, {"radius", sp.radius}};
  }
  j["stiffness"] = s.stiffness;
  j["damping"] = s.damping;
  return j;
}

json to_json(const WorldConfig& w) {
  json surfaces = json::array();
  for (const ContactSurface& s : w.surfaces) surfaces.push_back(to_json(s));
  return {{"follower",
           {{"pose", to_json(w.follower.pose)},
            {"max_linear_speed", w.follower.max_linear_speed},
            {"max_angular_speed", w.follower.max_angular_speed}}},
          {"surfaces", surfaces},
          {"sensor_noise_std", w.sensor_noise_std},
          {"sensor_seed", w.sensor_seed}};
}

}  // namespace teleop
