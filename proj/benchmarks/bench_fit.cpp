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

#include <string>

#include "countgof/bootstrap.hpp"
#include "countgof/config.hpp"
#include "countgof/estimate.hpp"
#include "countgof/simulate.hpp"

namespace {

using namespace countgof;

SimulatedSeries series(const std::string& preset, std::size_t T) {
  DgpSpec d = config::dgp_preset(preset);
  d.seed = 7;
  return simulate_counts(d, T);
}

void BM_QmleArx(benchmark::State& state) {
  const auto sim = series("arx1-cos", static_cast<std::size_t>(state.range(0)));
  const LinkSpec link = config::dgp_preset("arx1-cos").link;
  for (auto _ : state) benchmark::DoNotOptimize(poisson_qmle(sim.series, link));
}
BENCHMARK(BM_QmleArx)->Arg(200)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_QmleGarch(benchmark::State& state) {
  const auto sim = series("garchx11-cos", static_cast<std::size_t>(state.range(0)));
  const LinkSpec link = config::dgp_preset("garchx11-cos").link;
  for (auto _ : state) benchmark::DoNotOptimize(poisson_qmle(sim.series, link));
}
BENCHMARK(BM_QmleGarch)->Arg(200)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  DgpSpec d = config::dgp_preset("garchx11-cos");
  for (auto _ : state) benchmark::DoNotOptimize(simulate_counts(d, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(100000);

// One full bootstrap test, B = 199, T = 200.
void BM_BootstrapTest(benchmark::State& state) {
  const auto sim = series("arx1-cos", 200);
  const LinkSpec link = config::dgp_preset("arx1-cos").link;
  const std::vector<StatisticSpec> specs{StatisticSpec{}};
  BootstrapPlan plan;
  plan.B = 199;
  plan.workers = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_test(sim.series, link, CountDistribution::poisson(), specs, plan));
}
BENCHMARK(BM_BootstrapTest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
