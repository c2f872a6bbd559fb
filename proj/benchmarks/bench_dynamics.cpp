// Copyright 2026 The ghzflux Authors
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

#include "ghzflux/dynamics.hpp"
#include "ghzflux/loop3.hpp"
#include "ghzflux/protocol.hpp"

using namespace ghzflux;

namespace {

const double kG0 = coupling_for_swap_time(100.0);

void BM_IdealProtocol(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SystemConfig c = SystemConfig::uniform(n, kG0);
  const Schedule s = build_ghz_schedule(n, kG0);
  for (auto _ : state) benchmark::DoNotOptimize(execute_ideal(c, s, false).ghz_fidelity);
}
BENCHMARK(BM_IdealProtocol)->Arg(3)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_StaticPropagatorBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LoopWindow w = symmetric_loop_window(100.0);
  const HamiltonianMatrix h = effective_hamiltonian(SystemConfig::uniform(n, kG0), w);
  for (auto _ : state) {
    StaticPropagator p(h);
    benchmark::DoNotOptimize(&p);
  }
}
BENCHMARK(BM_StaticPropagatorBuild)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_NoisyProtocol(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto method = state.range(1) == 0 ? NoisyMethod::local : NoisyMethod::full;
  const SystemConfig c = SystemConfig::uniform(n, kG0);
  const Schedule s = build_ghz_schedule(n, kG0);
  const auto settings = IntegratorSettings::effective_frame(100.0);
  const NoiseRates noise = NoiseRates::uniform(n, 2e-4);
  for (auto _ : state) benchmark::DoNotOptimize(execute_noisy(c, s, noise, settings, method).fidelity);
}
BENCHMARK(BM_NoisyProtocol)
    ->Args({3, 0})
    ->Args({3, 1})
    ->Args({5, 0})
    ->Args({5, 1})
    ->Args({9, 0})
    ->Unit(benchmark::kMillisecond);

void BM_LabWindow(benchmark::State& state) {
  const double ratio = 0.02;
  const double delta = 2 * kPi * 0.2;
  const SystemConfig c = SystemConfig::alternating(3, ratio * delta, 2 * kPi * 5.0, delta);
  LoopWindow w;
  w.phases = kGhzWindowPhases;
  w.duration = circulation_period(c.g0).swap_time;
  const auto specs = lab_couplings(c, w);
  IntegratorSettings settings = IntegratorSettings::lab_frame(c);
  settings.check_step_halving = false;
  const StateVector psi0 = make_basis_state(3, BasisLabel("010"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_lab(psi0, c, specs, 0.0, w.duration, settings).norm());
  }
  state.counters["steps"] = w.duration / settings.step;
}
BENCHMARK(BM_LabWindow)->Unit(benchmark::kMillisecond);

void BM_Trajectories(benchmark::State& state) {
  const int n = 3;
  const SystemConfig c = SystemConfig::uniform(n, kG0);
  const Schedule s = build_ghz_schedule(n, kG0);
  const auto settings = IntegratorSettings::effective_frame(100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        execute_trajectories(c, s, NoiseRates::uniform(n, 5e-4), settings, static_cast<int>(state.range(0)), 1)
            .fidelity);
  }
}
BENCHMARK(BM_Trajectories)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
