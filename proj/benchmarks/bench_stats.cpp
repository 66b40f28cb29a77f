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

#include "teleop/stats.hpp"

namespace teleop {
namespace {

std::vector<double> sample(std::size_t n, double mean, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(mean, 1.0);
  std::vector<double> out(n);
  for (double& x : out) x = g(rng);
  return out;
}

void BM_WelchT(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)), 0.0, 1);
  const auto y = sample(static_cast<std::size_t>(state.range(0)), 0.3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(welch_t(x, y));
}
BENCHMARK(BM_WelchT)->Arg(70)->Arg(10000);

void BM_LeveneTest(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)), 0.0, 3);
  const auto y = sample(static_cast<std::size_t>(state.range(0)), 0.3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(levene_test(x, y));
}
BENCHMARK(BM_LeveneTest)->Arg(70)->Arg(10000);

}  // namespace
}  // namespace teleop
