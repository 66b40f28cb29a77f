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
#include <span>
#include <vector>

namespace teleop {

// ---------------------------------------------------------------------------
// Distributions

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued fraction (modified Lentz), absolute accuracy ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with dof > 0 degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// P(F >= f) for the F distribution with (d1, d2) degrees of freedom.
double fisher_f_sf(double f, double d1, double d2);

// ---------------------------------------------------------------------------
// Binning

struct BinStat {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  std::size_t count = 0;
  double mean = 0.0;      // 0 when empty
  double variance = 0.0;  // unbiased; 0 when count < 2
  bool empty = true;
  bool variance_defined = false;  // count >= 2
};

struct BinStats {
  double b_min = 0.0;
  double b_max = 0.007;
  double b_step = 0.0001;
  std::vector<BinStat> bins;
  std::size_t below_range = 0;
  std::size_t above_range = 0;
};

/// Number of bins covering [b_min, b_max] with width b_step; a range that is
/// an integer multiple of the step to 1e-9 relative is not padded.
std::size_t bin_count(double b_min, double b_max, double b_step);

/// Bin of b: left-closed, right-open, except the last bin which also holds
/// b_max. Returns -1 below and bin_count above the range.
long bin_index(double b, double b_min, double b_max, double b_step);

/// Conditional mean and variance of a given the bin of b.
/// Throws std::invalid_argument on size mismatch, b_step <= 0 or
/// b_max <= b_min.
BinStats bin_conditional_stats(std::span<const double> a, std::span<const double> b,
                               double b_min = 0.0, double b_max = 0.007, double b_step = 0.0001);

// ---------------------------------------------------------------------------
// Two-sample tests. All throw std::invalid_argument for samples with fewer
// than two values and std::domain_error for degenerate spreads.

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;  // two-sided
};

WelchResult welch_t(std::span<const double> x, std::span<const double> y);

struct CohensD {
  double d = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Normal-approximation standard error
  /// sqrt((n1 + n2) / (n1 n2) + d^2 / (2 (n1 + n2))).
  double se = 0.0;
};

/// (mean x - mean y) / pooled SD with a 95% normal-approximation interval.
CohensD cohens_d(std::span<const double> x, std::span<const double> y);

struct LeveneResult {
  double w = 0.0;
  double p = 1.0;
  double df1 = 1.0;
  double df2 = 0.0;
};

/// Brown-Forsythe variant: absolute deviations from the group medians.
LeveneResult levene_test(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
/// Unbiased sample variance; requires at least two values.
double sample_variance(std::span<const double> x);
double median(std::span<const double> x);

}  // namespace teleop
