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


#include <benchmark/benchmark.h>

#include "teleop/interaction.hpp"
#include "teleop/presets.hpp"
#include "teleop/scenario.hpp"
#include "teleop/sim_world.hpp"

namespace teleop {
namespace {

void BM_AdmittanceStep(benchmark::State& state) {
  const AdmittanceIntegrator integ(AdmittanceParams::defaults(), 0.008);
  AdmittanceState s;
  const Wrench h{Vec3(10.0, 0.0, -2.0), Vec3(0.0, 0.1, 0.0)};
  for (auto _ : state) {
    s = integ.step(s, h);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_AdmittanceStep);

// One full control cycle of a dental trial, averaged over the whole script.
void BM_DentalTrial(benchmark::State& state) {
  const ScenarioConfig cfg = dental_trial(ScenarioId::kB, DentalLayout::standard(), 0, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.tick_count()));
}
BENCHMARK(BM_DentalTrial)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace teleop
