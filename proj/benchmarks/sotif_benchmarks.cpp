// Copyright 2026 The sotif-tc Authors
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


#include "sotif/core_model.hpp"
#include "sotif/scenario.hpp"
#include "sotif/simulator.hpp"
#include "sotif/taxonomy.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

namespace
{

const std::filesystem::path kData{SOTIF_DATA_DIR};

sotif::OddDefinition fixture_odd() { return sotif::load_odd(kData / "odd.json"); }

std::vector<sotif::Scenario> fixture_scenarios()
{
  const auto taxonomy = sotif::load_taxonomy(kData / "taxonomy.json");
  const auto odd = fixture_odd();
  const auto conditions = sotif::filter_by_odd(sotif::enumerate_leaves(taxonomy), odd.odd_tags);
  return sotif::generate_scenarios(
    odd, conditions, sotif::load_effect_mapping(kData / "effects.json"), 42);
}

void BM_rss_min_distance(benchmark::State & state)
{
  sotif::VehicleParams p = fixture_odd().vehicle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p);
    benchmark::DoNotOptimize(sotif::rss_min_distance(p));
  }
}
BENCHMARK(BM_rss_min_distance);

void BM_simulate_nominal(benchmark::State & state)
{
  const auto scenarios = fixture_scenarios();
  sotif::SimConfig cfg;
  cfg.dt = 1.0 / static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sotif::simulate(scenarios.front(), cfg, ++seed));
  }
}
BENCHMARK(BM_simulate_nominal)->Arg(100)->Arg(1000)->Arg(10000);

void BM_monte_carlo_sweep(benchmark::State & state)
{
  const auto scenarios = fixture_scenarios();
  const sotif::SimConfig cfg;
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sotif::monte_carlo_sweep(scenarios, cfg, 20, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scenarios.size()) * 20);
}
BENCHMARK(BM_monte_carlo_sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
