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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "teleop/pose_filters.hpp"

namespace teleop {
namespace {

std::vector<Pose> noisy_poses(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1e-3);
  std::vector<Pose> out(n);
  for (Pose& p : out) {
    p.position = Vec3(g(rng), g(rng), g(rng));
    p.orientation = quat_exp(Vec3(g(rng), g(rng), g(rng)) * 50.0);
  }
  return out;
}

// Per-update cost should stay flat as the window grows.
void BM_PoseFilterPush(benchmark::State& state) {
  const auto window = static_cast<std::size_t>(state.range(0));
  const std::vector<Pose> poses = noisy_poses(4096);
  PoseFilter f(window);
  for (std::size_t i = 0; i < 2 * window; ++i) f.push(poses[i % poses.size()]);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.push(poses[i++ % poses.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PoseFilterPush)->RangeMultiplier(8)->Range(8, 4096);

void BM_VectorWindowPush(benchmark::State& state) {
  const auto window = static_cast<std::size_t>(state.range(0));
  VectorWindow w(window);
  Vec3 x = Vec3::Zero();
  for (auto _ : state) {
    x += Vec3(1e-3, -2e-3, 5e-4);
    benchmark::DoNotOptimize(w.push(x));
  }
}
BENCHMARK(BM_VectorWindowPush)->Arg(8)->Arg(4096);

void BM_DominantEigen(benchmark::State& state) {
  const std::vector<Pose> poses = noisy_poses(16);
  Mat4 m = Mat4::Zero();
  for (const Pose& p : poses) m += p.orientation.coeffs() * p.orientation.coeffs().transpose();
  const Vec4 seed = poses.front().orientation.coeffs();
  for (auto _ : state) benchmark::DoNotOptimize(dominant_eigenvector_sym4(m, seed));
}
BENCHMARK(BM_DominantEigen);

}  // namespace
}  // namespace teleop
