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


#include "support/random.hpp"

#include <cmath>
#include <numbers>

namespace teleop::testing {

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal(double mean, double stddev) {
  return std::normal_distribution<double>(mean, stddev)(engine_);
}

int Rng::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

Vec3 Rng::vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

Vec3 Rng::unit_vector() {
  Vec3 v;
  do {
    v = {normal(), normal(), normal()};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

UnitQuaternion Rng::quaternion() {
  const double u1 = uniform();
  const double u2 = uniform(0.0, 2.0 * std::numbers::pi);
  const double u3 = uniform(0.0, 2.0 * std::numbers::pi);
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return {a * std::sin(u2), a * std::cos(u2), b * std::sin(u3), b * std::cos(u3)};
}

Rotation3 Rng::rotation() { return Rotation3::from_quaternion(quaternion()); }

UnitQuaternion Rng::small_rotation(double max_angle) {
  return quat_exp(unit_vector() * uniform(0.0, max_angle));
}

std::vector<double> normal_sample(Rng& rng, std::size_t n, double mean, double stddev) {
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal(mean, stddev);
  return out;
}

}  // namespace teleop::testing
