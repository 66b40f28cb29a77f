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


#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace teleop::testing {

namespace {

long double sum_of(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return s;
}

long double mean_of(std::span<const double> v) {
  return sum_of(v) / static_cast<long double>(v.size());
}

long double var_of(std::span<const double> v) {
  const long double m = mean_of(v);
  long double s = 0.0L;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<long double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Mat3 quaternion_matrix(const Vec4& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Mat3 axis_angle_matrix(const Vec3& axis, double angle) {
  const Vec3 u = axis.normalized();
  Mat3 k;
  k << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

double quaternion_angle(const Vec4& a, const Vec4& b) {
  const Vec4 bb = a.dot(b) < 0.0 ? Vec4(-b) : b;
  // atan2 gives half the 4-D angle between a and bb; the rotation angle is
  // twice that 4-D angle.
  return 4.0 * std::atan2((a - bb).norm(), (a + bb).norm());
}

Vec4 dense_quaternion_mean(std::span<const Vec4> samples) {
  Mat4 m = Mat4::Zero();
  for (const Vec4& q : samples) m += q * q.transpose();
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  // Eigenvalues come sorted ascending.
  return es.eigenvectors().col(3).normalized();
}

std::vector<AxisSample> refined_axis_trajectory(double m, double d, double k,
                                                std::span<const double> inputs, double period,
                                                int substeps) {
  const double h = period / substeps;
  std::vector<AxisSample> out;
  out.reserve(inputs.size());
  double x = 0.0;
  double v = 0.0;
  for (double u : inputs) {
    auto acc = [&](double xx, double vv) { return (u - d * vv - k * xx) / m; };
    for (int s = 0; s < substeps; ++s) {
      const double k1x = v, k1v = acc(x, v);
      const double k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
      const double k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
      const double k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
      x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    out.push_back({x, v});
  }
  return out;
}

OracleWelch oracle_welch(std::span<const double> x, std::span<const double> y) {
  const long double nx = x.size();
  const long double ny = y.size();
  const long double ax = var_of(x) / nx;
  const long double ay = var_of(y) / ny;
  OracleWelch r;
  r.t = static_cast<double>((mean_of(x) - mean_of(y)) / std::sqrt(ax + ay));
  r.dof = static_cast<double>((ax + ay) * (ax + ay) /
                              (ax * ax / (nx - 1.0L) + ay * ay / (ny - 1.0L)));
  const boost::math::students_t dist(r.dof);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

double oracle_cohens_d(std::span<const double> x, std::span<const double> y) {
  const long double nx = x.size();
  const long double ny = y.size();
  const long double pooled =
      ((nx - 1.0L) * var_of(x) + (ny - 1.0L) * var_of(y)) / (nx + ny - 2.0L);
  return static_cast<double>((mean_of(x) - mean_of(y)) / std::sqrt(pooled));
}

OracleLevene oracle_levene(const std::vector<std::vector<double>>& groups) {
  // One-way ANOVA on |x - median| (Brown-Forsythe).
  std::vector<std::vector<double>> z;
  std::size_t n = 0;
  for (const auto& g : groups) {
    const double med = median_of(g);
    std::vector<double> d;
    for (double v : g) d.push_back(std::abs(v - med));
    n += d.size();
    z.push_back(std::move(d));
  }
  const long double k = static_cast<long double>(groups.size());
  long double grand = 0.0L;
  for (const auto& d : z) grand += sum_of(d);
  grand /= static_cast<long double>(n);
  long double between = 0.0L;
  long double within = 0.0L;
  for (const auto& d : z) {
    const long double m = mean_of(d);
    between += static_cast<long double>(d.size()) * (m - grand) * (m - grand);
    for (double v : d) within += (v - m) * (v - m);
  }
  OracleLevene r;
  const long double df1 = k - 1.0L;
  const long double df2 = static_cast<long double>(n) - k;
  r.w = static_cast<double>((between / df1) / (within / df2));
  const boost::math::fisher_f dist(static_cast<double>(df1), static_cast<double>(df2));
  r.p = boost::math::cdf(boost::math::complement(dist, r.w));
  return r;
}

}  // namespace teleop::testing
