// Copyright 2026 The hmpc Authors
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

#include <hmpc/homogeneity.hpp>
#include <hmpc/mpc.hpp>
#include <hmpc/ocp.hpp>

namespace {

using hmpc::Vector;

Vector v(std::initializer_list<double> xs)
{
  Vector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) {
    out(i++) = x;
  }
  return out;
}

void BM_DilatedNorm(benchmark::State & state)
{
  const hmpc::DilationStructure ds(v({1, 2, 1}), v({1, 1}), 0.0);
  const Vector x = v({0.3, -0.7, 1.1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::dilated_norm(ds, x));
  }
}
BENCHMARK(BM_DilatedNorm);

void BM_CheckHomogeneity(benchmark::State & state)
{
  const auto sys = hmpc::builtin("driftless3");
  hmpc::SamplingPlan plan;
  plan.samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::check_homogeneity(sys, *sys.declared_dilation(), plan));
  }
  state.SetItemsProcessed(state.iterations() * plan.samples * plan.alpha_points);
}
BENCHMARK(BM_CheckHomogeneity)->Arg(64)->Arg(256);

void BM_IntegrateRobot(benchmark::State & state)
{
  const auto sys = hmpc::builtin("robot");
  const auto u = hmpc::ControlSignal::constant(v({0.5, -0.3}), 3.0, 12);
  const double step = 3.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::integrate(sys, v({0.5, 0.5, 0.5}), u, 3.0, step));
  }
}
BENCHMARK(BM_IntegrateRobot)->Arg(48)->Arg(192);

void BM_SolveScalar(benchmark::State & state)
{
  const hmpc::OcpSpec spec{
    hmpc::builtin("scalar_power", {{{"k", 1.0}}, {}, {}}),
    hmpc::StageCost::weighted(v({1}), v({2}), v({1}), v({2})), 4.0,
    static_cast<int>(state.range(0)), 4, std::nullopt};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::solve(spec, v({1})).objective);
  }
}
BENCHMARK(BM_SolveScalar)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolveDriftless(benchmark::State & state)
{
  const auto sys = hmpc::builtin("driftless3");
  const hmpc::OcpSpec spec{
    sys, hmpc::StageCost::homogeneous(*sys.declared_dilation()), 2.0, 8, 4, std::nullopt};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::solve(spec, v({0, 0.2, 0}), std::nullopt, 2).objective);
  }
}
BENCHMARK(BM_SolveDriftless)->Unit(benchmark::kMillisecond);

void BM_ClosedLoopScalar(benchmark::State & state)
{
  hmpc::MpcConfig cfg;
  cfg.horizon = 1.0;
  cfg.segments = 20;
  cfg.delta = 0.1;
  cfg.steps = 20;
  cfg.restarts = 0;
  const auto sys = hmpc::builtin("scalar_power", {{{"k", 1.0}}, {}, {}});
  const auto cost = hmpc::StageCost::weighted(v({1}), v({2}), v({1}), v({2}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmpc::run_closed_loop(sys, cost, cfg, v({1})).verdict);
  }
}
BENCHMARK(BM_ClosedLoopScalar)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
