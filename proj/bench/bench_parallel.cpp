//------------------------------------------------------------------------------
//
//   Copyright 2026 The dutchclock Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "dutchclock/config.hpp"
#include "dutchclock/estimators.hpp"

using namespace dutchclock;

namespace {

ScenarioConfig const &baseline()
{
  static auto const cfg = preset("baseline");
  return cfg;
}

template <bool Parallel>
void BM_RunGrid(benchmark::State &state)
{
  auto const &cfg = baseline();
  auto        sc  = cfg.sim_config();
  sc.sessionsPerCell = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    auto cells = Parallel ? run_grid(sc, cfg.simulation.cells, cfg.simulation.mechanisms)
                          : run_grid_serial(sc, cfg.simulation.cells, cfg.simulation.mechanisms);
    benchmark::DoNotOptimize(cells);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          static_cast<long>(cfg.simulation.cells.size() * cfg.simulation.mechanisms.size()));
}

template <bool Parallel>
void BM_Bootstrap(benchmark::State &state)
{
  auto const &cfg    = baseline();
  auto        sc     = cfg.sim_config();
  sc.sessionsPerCell = 200;
  static auto const cells = run_grid(sc, {cfg.simulation.cells[0]}, {cfg.simulation.mechanisms[0]});
  auto const        ptrs  = pointers(cells[0].sessions[0]);
  BootstrapOptions const bo{static_cast<int>(state.range(0)), 1};
  for (auto _ : state)
  {
    auto b = Parallel ? estimate_bundle(ptrs, bo) : estimate_bundle_serial(ptrs, bo);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RunGrid<true>)->Name("run_grid/parallel")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunGrid<false>)->Name("run_grid/serial")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap<true>)->Name("bootstrap/parallel")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap<false>)->Name("bootstrap/serial")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
