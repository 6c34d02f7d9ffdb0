// Copyright 2026 The coldstart-dsmc Authors
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

// Serial reference sweeps against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "coldstart/experiment.hpp"
#include "coldstart/rga.hpp"

namespace {

using namespace coldstart;

void BM_RgaSerial(benchmark::State& state) {
  const TFMatrix m = default_engine_model();
  const auto grid = log_grid(1e-2, 1e2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rga_sweep(m, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RgaParallel(benchmark::State& state) {
  const TFMatrix m = default_engine_model();
  const auto grid = log_grid(1e-2, 1e2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rga_sweep_parallel(m, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_RgaSerial)->Arg(200)->Arg(2000)->Arg(20000);
BENCHMARK(BM_RgaParallel)->Arg(200)->Arg(2000)->Arg(20000);

// Short scenarios so one iteration stays well under a second.
Json sweep_template() { return Json{{"duration", 5.0}}; }

std::vector<std::vector<std::string>> phi_cells(int n) {
  std::vector<std::vector<std::string>> cells;
  for (int i = 0; i < n; ++i) {
    cells.push_back({"phi_true=" + std::to_string(0.5 + i * (1.0 / n))});
  }
  return cells;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cells = phi_cells(static_cast<int>(state.range(0)));
  const Json tmpl = sweep_template();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(tmpl, cells));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cells = phi_cells(static_cast<int>(state.range(0)));
  const Json tmpl = sweep_template();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_parallel(tmpl, cells));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
