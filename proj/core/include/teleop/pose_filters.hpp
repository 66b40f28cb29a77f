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

#include <cstddef>
#include <vector>

#include "teleop/se3.hpp"

namespace teleop {

/**
 * Sliding-window mean of 3-vectors with O(1) updates.
 *
 * Keeps the running sum of the last n samples. The sum is rebuilt from the
 * ring buffer every n pushes, which bounds floating-point drift without
 * changing the amortized cost.
 */
class VectorWindow {
 public:
  /// Throws std::invalid_argument if window_size == 0.
  explicit VectorWindow(std::size_t window_size);

  /// Adds a sample and returns the mean of the samples now in the window.
  Vec3 push(const Vec3& sample);

  /// Current mean; the zero vector before the first push.
  Vec3 value() const;

  const Vec3& sum() const { return sum_; }
  std::size_t count() const { return count_; }
  std::size_t window_size() const { return buffer_.size(); }
  void reset();

 private:
  void recompute_sum();

  std::vector<Vec3> buffer_;
  Vec3 sum_ = Vec3::Zero();
  std::size_t head_ = 0;  // next slot to write
  std::size_t count_ = 0;
  std::size_t pushes_since_recompute_ = 0;
};

struct DominantEigen {
  Vec4 vector = Vec4::UnitX();
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
  // Largest eigenvalue is repeated (or the matrix is zero): any unit vector
  // of its eigenspace is an answer, and the seed direction is kept.
  bool degenerate = false;
};

/**
 * Eigenvector of the largest eigenvalue of a symmetric PSD 4x4 matrix.
 *
 * Power iteration from `seed`, where the iteration matrix is squared (and
 * trace-normalised) after every step, so step k applies M^(2^k). Stops once
 * the residual |M v - lambda v| <= rel_tol * lambda and v is certified as the
 * dominant direction.
 */
DominantEigen dominant_eigenvector_sym4(const Mat4& m, const Vec4& seed,
                                        double rel_tol = 1e-12, int max_iterations = 200);

/**
 * Sliding-window quaternion mean: dominant eigenvector of C / m, where C is
 * the running sum of q q^T over the window.
 */
class QuaternionWindow {
 public:
  explicit QuaternionWindow(std::size_t window_size);

  /// Sign-aligns q with the previous sample, updates C and returns the mean.
  UnitQuaternion push(const UnitQuaternion& q);
  UnitQuaternion value() const { return output_; }

  const Mat4& outer_sum() const { return outer_sum_; }
  std::size_t count() const { return count_; }
  std::size_t window_size() const { return buffer_.size(); }
  /// Diagnostics of the last eigen solve.
  const DominantEigen& last_solve() const { return last_solve_; }
  void reset();

 private:
  void recompute_outer_sum();

  std::vector<Vec4> buffer_;
  Mat4 outer_sum_ = Mat4::Zero();
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  std::size_t pushes_since_recompute_ = 0;
  Vec4 last_sample_ = Vec4::UnitX();
  UnitQuaternion output_;
  DominantEigen last_solve_;
};

struct FilteredPose {
  Vec3 position = Vec3::Zero();
  UnitQuaternion orientation;

  Pose as_pose() const { return {position, orientation}; }
};

/// Moving-average filter for poses: vector mean for position, quaternion
/// mean for orientation, over the same window length.
class PoseFilter {
 public:
  explicit PoseFilter(std::size_t window_size);

  FilteredPose push(const Pose& raw);
  /// Identity pose before the first push.
  FilteredPose value() const { return current_; }
  std::size_t count() const { return positions_.count(); }
  void reset();

 private:
  VectorWindow positions_;
  QuaternionWindow orientations_;
  FilteredPose current_;
};

}  // namespace teleop
