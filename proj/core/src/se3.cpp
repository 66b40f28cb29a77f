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

#include "teleop/se3.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teleop {

namespace {

constexpr double kPi = std::numbers::pi;

// |w| below this means the rotation angle is pi to ~1e-12 rad.
constexpr double kHalfTurnTolerance = 5e-13;

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("UnitQuaternion: zero or non-finite input");
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

UnitQuaternion UnitQuaternion::conjugate() const {
  UnitQuaternion q;
  q.w_ = w_;
  q.x_ = -x_;
  q.y_ = -y_;
  q.z_ = -z_;
  return q;
}

UnitQuaternion UnitQuaternion::operator-() const {
  UnitQuaternion q;
  q.w_ = -w_;
  q.x_ = -x_;
  q.y_ = -y_;
  q.z_ = -z_;
  return q;
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& r) const {
  return {w_ * r.w_ - x_ * r.x_ - y_ * r.y_ - z_ * r.z_,
          w_ * r.x_ + x_ * r.w_ + y_ * r.z_ - z_ * r.y_,
          w_ * r.y_ - x_ * r.z_ + y_ * r.w_ + z_ * r.x_,
          w_ * r.z_ + x_ * r.y_ - y_ * r.x_ + z_ * r.w_};
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
  // v + 2 u x (u x v + w v), u = vector part
  const Vec3 u = vec();
  const Vec3 t = 2.0 * u.cross(v);
  return v + w_ * t + u.cross(t);
}

double UnitQuaternion::dot(const UnitQuaternion& o) const {
  return w_ * o.w_ + x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
}

UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b) {
  return a * b;
}

UnitQuaternion quat_conjugate(const UnitQuaternion& q) { return q.conjugate(); }

double angular_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  const UnitQuaternion rel = a.conjugate() * b;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

UnitQuaternion quat_exp(const Vec3& v) {
  const double angle = v.norm();
  const double half = 0.5 * angle;
  // sin(half) / angle, with its Taylor expansion near zero
  const double k = angle < 1e-8 ? 0.5 - angle * angle / 48.0 : std::sin(half) / angle;
  return {std::cos(half), k * v.x(), k * v.y(), k * v.z()};
}

Vec3 quat_log(const UnitQuaternion& q) {
  // Work in the hemisphere w >= 0 so the angle lands in [0, pi].
  const UnitQuaternion h = q.w() < 0.0 ? -q : q;
  const Vec3 u = h.vec();
  const double s = u.norm();
  if (s < 1e-300) {
    return Vec3::Zero();
  }
  const double angle = 2.0 * std::atan2(s, h.w());
  return u * (angle / s);
}

UnitQuaternion slerp(const UnitQuaternion& a, const UnitQuaternion& b, double u) {
  if (u == 0.0) {
    return a;
  }
  const UnitQuaternion rel = a.conjugate() * b;
  return a * quat_exp(u * quat_log(rel));
}

Rotation3 Rotation3::from_matrix(const Mat3& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("Rotation3: non-finite matrix");
  }
  const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-6 || std::abs(m.determinant() - 1.0) > 1e-6) {
    throw std::invalid_argument("Rotation3: matrix is not a proper rotation");
  }
  // Nearest rotation in the Frobenius norm.
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Rotation3(svd.matrixU() * svd.matrixV().transpose());
}

Rotation3 Rotation3::from_quaternion(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return Rotation3(m);
}

Rotation3 Rotation3::operator*(const Rotation3& rhs) const { return Rotation3(m_ * rhs.m_); }

Rotation3 Rotation3::transpose() const { return Rotation3(Mat3(m_.transpose())); }

UnitQuaternion Rotation3::to_quaternion() const {
  // Shepperd: branch on the largest of trace and the diagonal entries.
  const Mat3& m = m_;
  const double tr = m.trace();
  if (tr >= m(0, 0) && tr >= m(1, 1) && tr >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    return {0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s};
  }
  if (m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    return {(m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s};
  }
  if (m(1, 1) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
    return {(m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s};
  }
  const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
  return {(m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s};
}

Rotation3 elementary_rotation(Axis axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (axis) {
    case Axis::kX:
      return Rotation3::from_quaternion({c, s, 0.0, 0.0});
    case Axis::kY:
      return Rotation3::from_quaternion({c, 0.0, s, 0.0});
    case Axis::kZ:
      break;
  }
  return Rotation3::from_quaternion({c, 0.0, 0.0, s});
}

AxisAngle AxisAngle::from_rotation_vector(const Vec3& v) {
  const double angle = v.norm();
  if (angle == 0.0) {
    return {};
  }
  return {v / angle, angle};
}

Rotation3 rotation_from_axis_angle(const AxisAngle& aa) {
  if (aa.angle == 0.0) {
    return Rotation3::identity();
  }
  return exp_so3(aa.axis.normalized() * aa.angle);
}

AxisAngleResult axis_angle_from_rotation(const Rotation3& r) {
  // Shepperd's branch choice picks the largest-magnitude diagonal column near
  // a half turn, so the axis at angle = pi is deterministic.
  UnitQuaternion q = r.to_quaternion();
  if (q.w() < 0.0) {
    q = -q;
  }
  AxisAngleResult out;
  const Vec3 u = q.vec();
  const double s = u.norm();
  if (s < 1e-300) {
    return out;
  }
  out.value.axis = u / s;
  out.value.angle = 2.0 * std::atan2(s, q.w());
  out.degenerate = q.w() < kHalfTurnTolerance;
  if (out.degenerate) {
    out.value.angle = kPi;
  }
  return out;
}

Rotation3 exp_so3(const Vec3& v) { return Rotation3::from_quaternion(quat_exp(v)); }

Vec3 log_so3(const Rotation3& r) { return quat_log(r.to_quaternion()); }

double rotation_angle(const Rotation3& r) {
  const UnitQuaternion q = r.to_quaternion();
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

Vec6 Twist::as_vector() const {
  Vec6 v;
  v << linear, angular;
  return v;
}

Twist Twist::from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

Vec6 Wrench::as_vector() const {
  Vec6 v;
  v << force, torque;
  return v;
}

Wrench Wrench::from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

Twist rotate_twist(const Rotation3& r, const Twist& v) { return {r * v.linear, r * v.angular}; }

Wrench rotate_wrench(const Rotation3& r, const Wrench& h) { return {r * h.force, r * h.torque}; }

SwingTwist swing_twist_about_z(const UnitQuaternion& q) {
  double w = q.w();
  double z = q.z();
  SwingTwist out;
  if (std::hypot(w, z) < 1e-12) {
    // Half turn about an axis in the xy-plane: no z component to extract.
    out.swing = q;
    out.degenerate = true;
    return out;
  }
  if (w < 0.0) {
    w = -w;
    z = -z;
  }
  const UnitQuaternion twist(w, 0.0, 0.0, z);
  out.swing = q * twist.conjugate();
  out.twist_angle = 2.0 * std::atan2(z, w);
  return out;
}

Transform compose(const Transform& a, const Transform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Transform inverse(const Transform& a) {
  const Rotation3 rt = a.rotation.transpose();
  return {rt, -(rt * a.translation)};
}

Transform Pose::to_transform() const {
  return {Rotation3::from_quaternion(orientation), position};
}

Pose Pose::from_transform(const Transform& t) {
  return {t.translation, t.rotation.to_quaternion()};
}

}  // namespace teleop
