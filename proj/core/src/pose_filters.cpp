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

#include "teleop/pose_filters.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

VectorWindow::VectorWindow(std::size_t window_size) {
  if (window_size == 0) {
    throw std::invalid_argument("VectorWindow: window size must be positive");
  }
  buffer_.assign(window_size, Vec3::Zero());
}

Vec3 VectorWindow::push(const Vec3& sample) {
  const std::size_t n = buffer_.size();
  if (count_ == n) {
    sum_ -= buffer_[head_];
  } else {
    ++count_;
  }
  buffer_[head_] = sample;
  sum_ += sample;
  head_ = (head_ + 1) % n;
  if (++pushes_since_recompute_ >= n) {
    recompute_sum();
  }
  return sum_ / static_cast<double>(count_);
}

Vec3 VectorWindow::value() const {
  if (count_ == 0) {
    return Vec3::Zero();
  }
  return sum_ / static_cast<double>(count_);
}

void VectorWindow::reset() {
  std::fill(buffer_.begin(), buffer_.end(), Vec3::Zero());
  sum_.setZero();
  head_ = 0;
  count_ = 0;
  pushes_since_recompute_ = 0;
}

void VectorWindow::recompute_sum() {
  // Unfilled slots hold zeros, so summing the whole buffer is exact.
  Vec3 s = Vec3::Zero();
  for (const Vec3& v : buffer_) {
    s += v;
  }
  sum_ = s;
  pushes_since_recompute_ = 0;
}

DominantEigen dominant_eigenvector_sym4(const Mat4& m, const Vec4& seed, double rel_tol,
                                        int max_iterations) {
  DominantEigen out;
  const double trace = m.trace();
  Vec4 v = seed;
  if (!(v.norm() > 0.0) || !v.allFinite()) {
    v = Vec4::UnitX();
  }
  v.normalize();
  out.vector = v;
  if (!(trace > 0.0)) {
    out.degenerate = true;
    out.converged = true;
    return out;
  }

  Mat4 a = m / trace;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    const Vec4 mv = m * v;
    const double lambda = v.dot(mv);
    const double residual = (mv - lambda * v).norm();
    // Eigenvalues of a PSD matrix sum to its trace, so lambda >= trace / 2
    // rules out any larger eigenvalue. Once the iteration matrix is a rank-one
    // projector, an eigenvector with a sizeable component in its range is the
    // dominant one; an eigenvector orthogonal to it is not.
    const double frob2 = a.squaredNorm();
    const bool certified =
        lambda >= 0.5 * trace || (frob2 >= 1.0 - 1e-9 && (a * v).norm() >= 0.5);
    if (residual <= rel_tol * lambda && certified) {
      out.vector = v;
      out.eigenvalue = lambda;
      out.converged = true;
      return out;
    }

    Vec4 w = a * v;
    double wn = w.norm();
    if (!(wn > 1e-150)) {
      // Seed orthogonal to the dominant eigenspace: restart from the column
      // of the iteration matrix with the largest norm.
      Eigen::Index col = 0;
      a.colwise().squaredNorm().maxCoeff(&col);
      w = a.col(col);
      wn = w.norm();
    }
    v = w / wn;

    const Mat4 a2 = a * a;
    const double t2 = a2.trace();
    if (!(t2 > 0.0)) {
      break;
    }
    const Mat4 next = a2 / t2;
    if ((next - a).cwiseAbs().maxCoeff() < 1e-15 && frob2 < 1.0 - 1e-9) {
      // Squaring no longer changes A and it is not rank one: the top
      // eigenvalue has multiplicity > 1.
      const Vec4 mv2 = m * v;
      out.vector = v;
      out.eigenvalue = v.dot(mv2);
      out.degenerate = true;
      out.converged = true;
      return out;
    }
    a = next;
  }
  out.vector = v;
  out.eigenvalue = v.dot(m * v);
  out.converged = false;
  return out;
}

QuaternionWindow::QuaternionWindow(std::size_t window_size) {
  if (window_size == 0) {
    throw std::invalid_argument("QuaternionWindow: window size must be positive");
  }
  buffer_.assign(window_size, Vec4::Zero());
}

UnitQuaternion QuaternionWindow::push(const UnitQuaternion& q) {
  const std::size_t n = buffer_.size();
  Vec4 s = q.coeffs();
  if (count_ > 0 && s.dot(last_sample_) < 0.0) {
    s = -s;
  }
  if (count_ == n) {
    const Vec4& old = buffer_[head_];
    outer_sum_.noalias() -= old * old.transpose();
  } else {
    ++count_;
  }
  buffer_[head_] = s;
  outer_sum_.noalias() += s * s.transpose();
  head_ = (head_ + 1) % n;
  last_sample_ = s;
  if (++pushes_since_recompute_ >= n) {
    recompute_outer_sum();
  }

  const Mat4 mean = outer_sum_ / static_cast<double>(count_);
  // First solve seeds from the sample itself; later ones from the last mean.
  const Vec4 seed = count_ == 1 ? s : output_.coeffs();
  last_solve_ = dominant_eigenvector_sym4(mean, seed);
  Vec4 v = last_solve_.vector;
  if (v.dot(seed) < 0.0) {
    v = -v;
  }
  output_ = UnitQuaternion::from_coeffs(v);
  return output_;
}

void QuaternionWindow::reset() {
  std::fill(buffer_.begin(), buffer_.end(), Vec4::Zero());
  outer_sum_.setZero();
  head_ = 0;
  count_ = 0;
  pushes_since_recompute_ = 0;
  last_sample_ = Vec4::UnitX();
  output_ = UnitQuaternion::identity();
  last_solve_ = {};
}

void QuaternionWindow::recompute_outer_sum() {
  Mat4 c = Mat4::Zero();
  for (const Vec4& v : buffer_) {
    c.noalias() += v * v.transpose();
  }
  outer_sum_ = c;
  pushes_since_recompute_ = 0;
}

PoseFilter::PoseFilter(std::size_t window_size)
    : positions_(window_size), orientations_(window_size) {}

FilteredPose PoseFilter::push(const Pose& raw) {
  current_.position = positions_.push(raw.position);
  current_.orientation = orientations_.push(raw.orientation);
  return current_;
}

void PoseFilter::reset() {
  positions_.reset();
  orientations_.reset();
  current_ = {};
}

}  // namespace teleop
