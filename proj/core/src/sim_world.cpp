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

#include "teleop/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teleop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Streams for counter_gaussian so tremor and sensor noise never collide.
constexpr std::uint64_t kTremorStream = 0x7472656d6f72ULL;
constexpr std::uint64_t kSensorStream = 0x73656e736f72ULL;

double unit_open(std::uint64_t bits) {
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t key = splitmix64(splitmix64(seed ^ splitmix64(stream)) + counter);
  const double u1 = unit_open(splitmix64(key));
  const double u2 = unit_open(splitmix64(key + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

TremorSpec TremorSpec::physiological(std::uint64_t seed) {
  TremorSpec s;
  s.components = {{0.0003, 10.0, 0.0}, {0.00015, 8.5, 0.0}};
  s.noise_std = 0.00005;
  s.seed = seed;
  return s;
}

void TremorSpec::validate() const {
  for (const TremorComponent& c : components) {
    if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude) || !std::isfinite(c.frequency_hz) ||
        !std::isfinite(c.phase)) {
      throw std::invalid_argument("TremorSpec: amplitudes must be finite and >= 0");
    }
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw std::invalid_argument("TremorSpec: noise_std must be finite and >= 0");
  }
}

Vec3 TremorSpec::displacement(double t) const {
  Vec3 d = Vec3::Zero();
  for (const TremorComponent& c : components) {
    if (c.amplitude == 0.0) {
      continue;
    }
    for (int axis = 0; axis < 3; ++axis) {
      d(axis) += c.amplitude *
                 std::sin(kTwoPi * c.frequency_hz * t + c.phase + axis * kTwoPi / 3.0);
    }
  }
  if (noise_std > 0.0) {
    const auto counter = static_cast<std::uint64_t>(std::llround(t * 1e6));
    for (int axis = 0; axis < 3; ++axis) {
      d(axis) += noise_std * counter_gaussian(seed, kTremorStream + axis, counter);
    }
  }
  return d;
}

void LeaderScript::validate() const {
  if (waypoints.empty()) {
    throw std::invalid_argument("LeaderScript: at least one waypoint required");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (!std::isfinite(waypoints[i].time) || !waypoints[i].pose.position.allFinite()) {
      throw std::invalid_argument("LeaderScript: non-finite waypoint");
    }
    if (i > 0 && !(waypoints[i].time > waypoints[i - 1].time)) {
      throw std::invalid_argument("LeaderScript: waypoint times must be strictly increasing");
    }
  }
  tremor.validate();
}

double LeaderScript::end_time() const {
  return waypoints.empty() ? 0.0 : waypoints.back().time;
}

Pose leader_sample(const LeaderScript& script, double t) {
  const std::vector<Waypoint>& w = script.waypoints;
  if (w.empty()) {
    throw std::invalid_argument("leader_sample: empty script");
  }
  Pose base;
  if (t <= w.front().time) {
    base = w.front().pose;
  } else if (t >= w.back().time) {
    base = w.back().pose;
  } else {
    const auto next = std::upper_bound(w.begin(), w.end(), t,
                                       [](double v, const Waypoint& p) { return v < p.time; });
    const Waypoint& b = *next;
    const Waypoint& a = *(next - 1);
    if (a.mode == Interpolation::kHold) {
      base = a.pose;
    } else {
      const double u = (t - a.time) / (b.time - a.time);
      base.position = a.pose.position + u * (b.pose.position - a.pose.position);
      base.orientation = slerp(a.pose.orientation, b.pose.orientation, u);
    }
  }
  base.position += script.tremor.displacement(t);
  return base;
}

void FollowerModel::validate() const {
  if (!(max_linear_speed > 0.0) || !(max_angular_speed > 0.0)) {
    throw std::invalid_argument("FollowerModel: speed limits must be positive");
  }
  if (!pose.position.allFinite()) {
    throw std::invalid_argument("FollowerModel: non-finite pose");
  }
}

Pose follower_step(const FollowerModel& model, const Pose& commanded, double control_period) {
  Pose out;
  const Vec3 dp = commanded.position - model.pose.position;
  const double dist = dp.norm();
  const double max_step = model.max_linear_speed * control_period;
  out.position = dist <= max_step ? commanded.position
                                  : Vec3(model.pose.position + dp * (max_step / dist));

  const double angle = angular_distance(model.pose.orientation, commanded.orientation);
  const double max_turn = model.max_angular_speed * control_period;
  out.orientation = angle <= max_turn
                        ? commanded.orientation
                        : slerp(model.pose.orientation, commanded.orientation, max_turn / angle);
  return out;
}

void ContactSurface::validate() const {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness) || !(damping >= 0.0) ||
      !std::isfinite(damping)) {
    throw std::invalid_argument("ContactSurface: stiffness must be > 0 and damping >= 0");
  }
  if (const auto* p = std::get_if<Plane>(&geometry)) {
    if (std::abs(p->normal.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("ContactSurface: plane normal must be unit length");
    }
  } else if (const auto* s = std::get_if<Sphere>(&geometry)) {
    if (!(s->radius > 0.0)) {
      throw std::invalid_argument("ContactSurface: sphere radius must be positive");
    }
  }
}

double ContactSurface::penetration(const Vec3& tip, Vec3* normal) const {
  if (const auto* p = std::get_if<Plane>(&geometry)) {
    *normal = p->normal;
    return -p->normal.dot(tip - p->point);
  }
  const Sphere& s = std::get<Sphere>(geometry);
  const Vec3 r = tip - s.center;
  const double d = r.norm();
  *normal = d > 0.0 ? Vec3(r / d) : Vec3::UnitZ();
  return s.radius - d;
}

Wrench contact_wrench(const Pose& tool_tip, const Twist& tip_velocity,
                      const std::vector<ContactSurface>& surfaces) {
  Wrench h;
  for (const ContactSurface& s : surfaces) {
    Vec3 n;
    const double depth = s.penetration(tool_tip.position, &n);
    if (depth <= 0.0) {
      continue;
    }
    const double depth_rate = -n.dot(tip_velocity.linear);
    const double f = s.stiffness * depth + s.damping * depth_rate;
    if (f > 0.0) {
      h.force += f * n;
    }
  }
  return h;
}

void WorldConfig::validate() const {
  follower.validate();
  for (const ContactSurface& s : surfaces) {
    s.validate();
  }
  if (!(sensor_noise_std >= 0.0) || !std::isfinite(sensor_noise_std)) {
    throw std::invalid_argument("WorldConfig: sensor_noise_std must be finite and >= 0");
  }
}

World::World(const WorldConfig& cfg) : cfg_(cfg), follower_(cfg.follower) {
  cfg.validate();
  sense(Twist{}, 0);
}

void World::step(const Pose& commanded, double control_period, std::uint64_t tick) {
  const Pose prev = follower_.pose;
  follower_.pose = follower_step(follower_, commanded, control_period);
  Twist velocity;
  velocity.linear = (follower_.pose.position - prev.position) / control_period;
  velocity.angular =
      prev.orientation.rotate(quat_log(prev.orientation.conjugate() * follower_.pose.orientation)) /
      control_period;
  sense(velocity, tick + 1);
}

void World::sense(const Twist& velocity, std::uint64_t tick) {
  contact_ = contact_wrench(follower_.pose, velocity, cfg_.surfaces);
  const Rotation3 tool = Rotation3::from_quaternion(follower_.pose.orientation);
  sensed_ = rotate_wrench(tool.transpose(), contact_);
  if (cfg_.sensor_noise_std > 0.0) {
    for (int axis = 0; axis < 3; ++axis) {
      sensed_.force(axis) +=
          cfg_.sensor_noise_std * counter_gaussian(cfg_.sensor_seed, kSensorStream + axis, tick);
    }
  }
}

const char* to_string(EngagementState s) {
  switch (s) {
    case EngagementState::kIdle:
      return "idle";
    case EngagementState::kAligning:
      return "aligning";
    case EngagementState::kEngaged:
      return "engaged";
    case EngagementState::kTimedOut:
      return "timed_out";
  }
  return "idle";
}

TeleopPipeline::TeleopPipeline(const PipelineParams& params, const WorldConfig& world)
    : params_(params),
      world_(world),
      ehcc_(params.ehcc),
      controller_(params.interaction),
      hfc_(params.hfc, params.ehcc.control_period),
      debouncer_(params.engagement_hold, params.engagement_timeout) {
  if (params.interaction.control_period != params.ehcc.control_period) {
    throw std::invalid_argument("TeleopPipeline: control periods must match");
  }
}

void TeleopPipeline::request_engagement() {
  if (engagement_ == EngagementState::kEngaged) {
    return;
  }
  debouncer_.start(time());
  engagement_ = EngagementState::kAligning;
}

void TeleopPipeline::disengage() {
  ehcc_.disengage();
  debouncer_.reset();
  engagement_ = EngagementState::kIdle;
}

std::optional<Transform> TeleopPipeline::engagement_target() const {
  if (!last_stylus_) {
    return std::nullopt;
  }
  return ehcc_.engagement_target(*last_stylus_, world_.measured());
}

bool TeleopPipeline::aligned() const {
  return last_stylus_ && ehcc_.aligned(*last_stylus_, world_.measured());
}

LogRecord TeleopPipeline::tick(const std::optional<Pose>& stylus) {
  const double ts = params_.ehcc.control_period;
  LogRecord rec;
  rec.tick = tick_;
  rec.t = time();
  if (stylus) {
    last_stylus_ = stylus;
  }
  const Pose measured = world_.measured();

  std::optional<Pose> desired;
  if (engagement_ != EngagementState::kEngaged) {
    if (stylus) {
      filtered_stylus_ = ehcc_.observe(*stylus);
    }
    if (engagement_ == EngagementState::kAligning) {
      const auto status = debouncer_.update(aligned(), rec.t);
      if (status == EngagementDebouncer::Status::kEngaged) {
        engagement_ = EngagementState::kEngaged;
        ehcc_.engage(measured);
        controller_.reset(measured);
        hfc_.reset();
        phi_ = 0.0;
        desired = measured;
      } else if (status == EngagementDebouncer::Status::kTimedOut) {
        engagement_ = EngagementState::kTimedOut;
      }
    }
  } else if (stylus) {
    const EyeHandController::Step step = ehcc_.step(*stylus, measured);
    desired = step.desired;
    filtered_stylus_ = step.filtered;
    phi_ = step.phi;
  }

  rec.engaged = engagement_ == EngagementState::kEngaged;
  rec.stylus = last_stylus_.value_or(Pose{});
  rec.phi = phi_;

  if (rec.engaged) {
    const ControllerOutput out = controller_.tick(desired, measured, world_.sensed());
    world_.step(out.commanded, ts, tick_);
    const Rotation3 stylus_rot = Rotation3::from_quaternion(filtered_stylus_.orientation);
    const HapticFeedbackController::Output fb =
        hfc_.tick(out.tracking_error, world_.sensed().force.norm(), stylus_rot, phi_,
                  params_.ehcc.frames);
    rec.desired = desired.value_or(controller_.supervisor().last_valid().value_or(measured));
    rec.commanded = out.commanded;
    rec.b = out.virtual_penetration;
    rec.feedback = fb.force;
    rec.tracking_error = out.tracking_error;
    rec.scale_factor = out.scale_factor;
    rec.events = out.events;
  } else {
    world_.step(measured, ts, tick_);
    rec.desired = measured;
    rec.commanded = measured;
  }
  rec.measured = world_.measured();
  rec.force = world_.sensed().force;
  rec.a = rec.force.norm();
  ++tick_;
  return rec;
}

}  // namespace teleop
