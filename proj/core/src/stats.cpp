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

#include "teleop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace teleop {

namespace {

// Continued fraction for I_x(a, b), evaluated with the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h;
    }
  }
  return h;
}

void require_two(std::span<const double> x, const char* what) {
  if (x.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": each sample needs at least two values");
  }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0) || !(x <= 1.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) {
    throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
  }
  if (std::isnan(t)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (std::isinf(t)) {
    return 0.0;
  }
  return regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

double fisher_f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw std::invalid_argument("fisher_f_sf: degrees of freedom must be positive");
  }
  if (!(f > 0.0)) {
    return 1.0;
  }
  if (std::isinf(f)) {
    return 0.0;
  }
  return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

std::size_t bin_count(double b_min, double b_max, double b_step) {
  if (!(b_step > 0.0) || !(b_max > b_min) || !std::isfinite(b_max - b_min)) {
    throw std::invalid_argument("bin_count: need b_step > 0 and b_max > b_min");
  }
  const double ratio = (b_max - b_min) / b_step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(std::max(1.0, nearest));
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

long bin_index(double b, double b_min, double b_max, double b_step) {
  const auto n = static_cast<long>(bin_count(b_min, b_max, b_step));
  if (std::isnan(b)) {
    return n;
  }
  if (b < b_min) {
    return -1;
  }
  if (b > b_max) {
    return n;
  }
  if (b == b_max) {
    return n - 1;
  }
  long i = static_cast<long>(std::floor((b - b_min) / b_step));
  // Rounding of the division can land one bin off near an edge; settle it
  // against the same edge values the bins report.
  const auto lower = [&](long k) { return b_min + static_cast<double>(k) * b_step; };
  if (i > 0 && b < lower(i)) --i;
  if (i + 1 < n && b >= lower(i + 1)) ++i;
  return std::clamp(i, 0L, n - 1);
}

BinStats bin_conditional_stats(std::span<const double> a, std::span<const double> b, double b_min,
                               double b_max, double b_step) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("bin_conditional_stats: a and b differ in length");
  }
  BinStats out;
  out.b_min = b_min;
  out.b_max = b_max;
  out.b_step = b_step;
  const std::size_t n = bin_count(b_min, b_max, b_step);
  out.bins.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    BinStat& s = out.bins[i];
    s.lower = b_min + static_cast<double>(i) * b_step;
    s.upper = i + 1 == n ? b_max : b_min + static_cast<double>(i + 1) * b_step;
    s.center = 0.5 * (s.lower + s.upper);
  }
  // Welford accumulation per bin.
  std::vector<double> m2(n, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const long i = bin_index(b[k], b_min, b_max, b_step);
    if (i < 0) {
      ++out.below_range;
      continue;
    }
    if (static_cast<std::size_t>(i) >= n) {
      ++out.above_range;
      continue;
    }
    BinStat& s = out.bins[static_cast<std::size_t>(i)];
    ++s.count;
    const double delta = a[k] - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    m2[static_cast<std::size_t>(i)] += delta * (a[k] - s.mean);
  }
  for (std::size_t i = 0; i < n; ++i) {
    BinStat& s = out.bins[i];
    s.empty = s.count == 0;
    s.variance_defined = s.count >= 2;
    s.variance = s.variance_defined ? m2[i] / static_cast<double>(s.count - 1) : 0.0;
  }
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) {
    throw std::invalid_argument("mean: empty sample");
  }
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  require_two(x, "sample_variance");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double median(std::span<const double> x) {
  if (x.empty()) {
    throw std::invalid_argument("median: empty sample");
  }
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) {
    return hi;
  }
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

WelchResult welch_t(std::span<const double> x, std::span<const double> y) {
  require_two(x, "welch_t");
  require_two(y, "welch_t");
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  const double v1 = sample_variance(x) / n1;
  const double v2 = sample_variance(y) / n2;
  const double se2 = v1 + v2;
  if (!(se2 > 0.0)) {
    throw std::domain_error("welch_t: both samples have zero variance");
  }
  WelchResult r;
  r.t = (mean(x) - mean(y)) / std::sqrt(se2);
  r.dof = se2 * se2 / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
  r.p = student_t_two_sided_p(r.t, r.dof);
  return r;
}

CohensD cohens_d(std::span<const double> x, std::span<const double> y) {
  require_two(x, "cohens_d");
  require_two(y, "cohens_d");
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  const double pooled =
      ((n1 - 1.0) * sample_variance(x) + (n2 - 1.0) * sample_variance(y)) / (n1 + n2 - 2.0);
  if (!(pooled > 0.0)) {
    throw std::domain_error("cohens_d: pooled standard deviation is zero");
  }
  CohensD r;
  r.d = (mean(x) - mean(y)) / std::sqrt(pooled);
  r.se = std::sqrt((n1 + n2) / (n1 * n2) + r.d * r.d / (2.0 * (n1 + n2)));
  constexpr double kZ975 = 1.959963984540054;
  r.ci_low = r.d - kZ975 * r.se;
  r.ci_high = r.d + kZ975 * r.se;
  return r;
}

LeveneResult levene_test(std::span<const double> x, std::span<const double> y) {
  require_two(x, "levene_test");
  require_two(y, "levene_test");
  const auto deviations = [](std::span<const double> s) {
    const double med = median(s);
    std::vector<double> z;
    z.reserve(s.size());
    for (double v : s) z.push_back(std::abs(v - med));
    return z;
  };
  const std::vector<double> zx = deviations(x);
  const std::vector<double> zy = deviations(y);
  const double n1 = static_cast<double>(zx.size());
  const double n2 = static_cast<double>(zy.size());
  const double n = n1 + n2;
  const double mx = mean(zx);
  const double my = mean(zy);
  const double grand = (n1 * mx + n2 * my) / n;
  const double between = n1 * (mx - grand) * (mx - grand) + n2 * (my - grand) * (my - grand);
  double within = 0.0;
  for (double v : zx) within += (v - mx) * (v - mx);
  for (double v : zy) within += (v - my) * (v - my);
  if (!(within > 0.0)) {
    throw std::domain_error("levene_test: deviations from the medians are constant in both groups");
  }
  LeveneResult r;
  r.df1 = 1.0;
  r.df2 = n - 2.0;
  r.w = r.df2 * between / within;
  r.p = fisher_f_sf(r.w, r.df1, r.df2);
  return r;
}

}  // namespace teleop
