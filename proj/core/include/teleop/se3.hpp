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

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace teleop {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/**
 * Unit quaternion, scalar first, Hamilton product.
 *
 * Every constructor and product renormalizes, so |q| = 1 holds to machine
 * precision. q and -q describe the same rotation; functions that compare
 * rotations treat them as equal.
 */
class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  /// Normalizes (w, x, y, z). Throws std::invalid_argument on a zero or
  /// non-finite input.
  UnitQuaternion(double w, double x, double y, double z);

  static UnitQuaternion identity() { return {}; }
  static UnitQuaternion from_coeffs(const Vec4& wxyz) {
    return {wxyz[0], wxyz[1], wxyz[2], wxyz[3]};
  }

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec3 vec() const { return {x_, y_, z_}; }
  Vec4 coeffs() const { return {w_, x_, y_, z_}; }

  UnitQuaternion conjugate() const;
  UnitQuaternion operator-() const;
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;

  Vec3 rotate(const Vec3& v) const;
  double dot(const UnitQuaternion& other) const;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_conjugate(const UnitQuaternion& q);

/// Rotation angle in [0, pi] taking a to b; sign-invariant in both arguments.
double angular_distance(const UnitQuaternion& a, const UnitQuaternion& b);

/// Quaternion of the rotation by |v| about v / |v|.
UnitQuaternion quat_exp(const Vec3& rotation_vector);

/// Rotation vector (axis * angle, angle in [0, pi]) of q.
Vec3 quat_log(const UnitQuaternion& q);

/// Shortest-arc interpolation: a at u = 0, b (or -b) at u = 1.
UnitQuaternion slerp(const UnitQuaternion& a, const UnitQuaternion& b, double u);

/// Element of SO(3). Products of valid rotations stay valid to rounding.
class Rotation3 {
 public:
  Rotation3() = default;

  /// Throws std::invalid_argument unless m is orthonormal with det +1
  /// (tolerance 1e-6); the accepted matrix is projected onto the nearest
  /// rotation.
  static Rotation3 from_matrix(const Mat3& m);
  static Rotation3 from_quaternion(const UnitQuaternion& q);
  static Rotation3 identity() { return {}; }

  const Mat3& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  Rotation3 operator*(const Rotation3& rhs) const;
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation3 transpose() const;
  Rotation3 inverse() const { return transpose(); }

  UnitQuaternion to_quaternion() const;

 private:
  explicit Rotation3(const Mat3& m) : m_(m) {}
  Mat3 m_ = Mat3::Identity();
};

enum class Axis { kX, kY, kZ };

Rotation3 elementary_rotation(Axis axis, double angle);

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;

  Vec3 rotation_vector() const { return axis * angle; }
  static AxisAngle from_rotation_vector(const Vec3& v);
};

struct AxisAngleResult {
  AxisAngle value;
  // Angle is pi (to 1e-12): the axis sign is a convention, not data.
  bool degenerate = false;
};

Rotation3 rotation_from_axis_angle(const AxisAngle& aa);
AxisAngleResult axis_angle_from_rotation(const Rotation3& r);

/// Rodrigues exponential of a rotation vector.
Rotation3 exp_so3(const Vec3& rotation_vector);
/// Inverse of exp_so3 with angle in [0, pi].
Vec3 log_so3(const Rotation3& r);

/// Rotation angle of r in [0, pi].
double rotation_angle(const Rotation3& r);

struct Twist {
  Vec3 linear = Vec3::Zero();   // m/s
  Vec3 angular = Vec3::Zero();  // rad/s

  Vec6 as_vector() const;
  static Twist from_vector(const Vec6& v);
};

struct Wrench {
  Vec3 force = Vec3::Zero();   // N
  Vec3 torque = Vec3::Zero();  // N m

  Vec6 as_vector() const;
  static Wrench from_vector(const Vec6& v);
};

/// (I_2 (x) R) v: rotates the linear and angular parts independently.
Twist rotate_twist(const Rotation3& r, const Twist& v);
Wrench rotate_wrench(const Rotation3& r, const Wrench& h);

struct SwingTwist {
  UnitQuaternion swing;
  double twist_angle = 0.0;  // rad, in (-pi, pi]
  bool degenerate = false;   // w = z = 0: twist undefined, reported as 0
};

/// Decomposes q = swing * twist_z(twist_angle), with swing about an axis
/// orthogonal to z.
SwingTwist swing_twist_about_z(const UnitQuaternion& q);

/// Homogeneous transform: p_out = rotation * p_in + translation.
struct Transform {
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

Transform compose(const Transform& a, const Transform& b);
Transform inverse(const Transform& a);

struct Pose {
  Vec3 position = Vec3::Zero();
  UnitQuaternion orientation;

  Transform to_transform() const;
  static Pose from_transform(const Transform& t);
};

}  // namespace teleop
