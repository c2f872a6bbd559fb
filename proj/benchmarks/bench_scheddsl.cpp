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

#include "ghzflux/loop3.hpp"
#include "ghzflux/scheddsl.hpp"

using namespace ghzflux;

namespace {

std::string nine_qubit_document() {
  ScheduleDocument d;
  d.config = SystemConfig::uniform(9, coupling_for_swap_time(100.0));
  d.config.decay.assign(9, 2e-4);
  d.schedule = build_ghz_schedule(9, d.config.g0);
  return serialize_schedule(d);
}

void BM_Parse(benchmark::State& state) {
  const std::string text = nine_qubit_document();
  for (auto _ : state) benchmark::DoNotOptimize(parse_schedule(text).schedule.pulses.size());
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse);

void BM_Serialize(benchmark::State& state) {
  const ScheduleDocument d = parse_schedule(nine_qubit_document());
  for (auto _ : state) benchmark::DoNotOptimize(serialize_schedule(d).size());
}
BENCHMARK(BM_Serialize);

}  // namespace

BENCHMARK_MAIN();
