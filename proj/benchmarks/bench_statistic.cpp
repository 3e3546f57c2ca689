// Copyright 2026 The countgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include <vector>

#include "countgof/config.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/simulate.hpp"

namespace {

using namespace countgof;

GofInputs inputs(std::size_t T) {
  DgpSpec d = config::dgp_preset("arx1-cos");
  d.seed = 42;
  const auto sim = simulate_counts(d, T);
  const auto fit = poisson_qmle(sim.series, d.link);
  return make_gof_inputs(sim.series, d.link, fit);
}

void BM_DeltaTW(benchmark::State& state) {
  const GofInputs in = inputs(static_cast<std::size_t>(state.range(0)));
  TestTuning tu;
  for (auto _ : state) benchmark::DoNotOptimize(delta_tw(in, tu, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DeltaTW)->RangeMultiplier(2)->Range(100, 1600)->Complexity(benchmark::oNSquared);

void BM_DeltaTWQuadrature(benchmark::State& state) {
  const GofInputs in = inputs(static_cast<std::size_t>(state.range(0)));
  TestTuning tu;
  tu.kernel_eval = KernelEval::QuadratureGeneral;
  for (auto _ : state) benchmark::DoNotOptimize(delta_tw(in, tu, 1));
}
BENCHMARK(BM_DeltaTWQuadrature)->Arg(200)->Arg(800);

// All seven standard tunings share one kernel matrix.
void BM_StandardGrid(benchmark::State& state) {
  const GofInputs in = inputs(static_cast<std::size_t>(state.range(0)));
  std::vector<StatisticSpec> specs;
  for (const auto& t : config::standard_tuning_grid()) specs.push_back({Variant::DeltaTW, t});
  specs.push_back({Variant::Delta0});
  specs.push_back({Variant::Delta1});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_statistics(in, specs, 1));
}
BENCHMARK(BM_StandardGrid)->Arg(200)->Arg(1000);

void BM_KernelClosedForm(benchmark::State& state) {
  double l = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_rho_poisson(3, 5, l, 2.5, 0.0));
    l += 1e-9;
  }
}
BENCHMARK(BM_KernelClosedForm);

}  // namespace

BENCHMARK_MAIN();
