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

#ifndef SOTIF__SIMULATOR_HPP_
#define SOTIF__SIMULATOR_HPP_

#include "sotif/core_model.hpp"
#include "sotif/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sotif
{

struct SimConfig
{
  double dt{0.001};              // integration step [s]
  double max_time{60.0};         // [s]
  double perception_tick{0.05};  // sensor frame period [s]

  /// 0 < dt <= perception_tick <= max_time, all finite.
  void validate() const;
};

enum class Stage { perception_sense, perception_algo, decision, actuation };
enum class EventKind { object_detected, ghost_detected, brake_triggered, brake_effective, stopped, collision };
enum class Terminal { stopped, collision, timeout };

std::string_view to_string(Stage stage);
std::string_view to_string(EventKind kind);
std::string_view to_string(Terminal terminal);
std::optional<Stage> parse_stage(std::string_view s);
std::optional<EventKind> parse_event_kind(std::string_view s);
std::optional<Terminal> parse_terminal(std::string_view s);

struct SimEvent
{
  double time{0.0};
  Stage stage{Stage::decision};
  EventKind kind{EventKind::brake_triggered};
  double gap{0.0};       // true distance to the object [m]
  double velocity{0.0};  // ego speed at the event [m/s]
  std::optional<double> perceived_gap;  // distance of the reported detection, if any

  friend bool operator==(const SimEvent &, const SimEvent &) = default;
};

struct SimTrace
{
  std::string scenario_id;
  std::uint64_t seed{0};
  std::vector<SimEvent> events;
  std::vector<KinematicState> states;  // one sample per perception frame plus the final state
  std::optional<Terminal> terminal;

  friend bool operator==(const SimTrace &, const SimTrace &) = default;
};

struct KpiReport
{
  std::optional<double> ttc_at_trigger;  // nullopt: no trigger or not closing in
  double final_gap{0.0};                 // 0 on collision
  bool collision{false};
  double impact_speed{0.0};
  bool false_activation{false};
  bool brake_triggered{false};
  double d_rho_observed{0.0};
  double d_act_observed{0.0};
  Terminal terminal{Terminal::timeout};

  friend bool operator==(const KpiReport &, const KpiReport &) = default;
};

/// Per-scenario KPI statistics over a Monte-Carlo sweep.
struct KpiAggregate
{
  std::string scenario_id;
  std::string odd_id;
  std::size_t runs{0};
  double collision_rate{0.0};
  double false_activation_rate{0.0};
  double trigger_rate{0.0};
  double gap_mean{0.0};
  double gap_min{0.0};
  double gap_max{0.0};
  double impact_speed_mean{0.0};
  double impact_speed_min{0.0};
  double impact_speed_max{0.0};
  std::optional<double> ttc_min;   // over runs that triggered while closing in
  std::optional<double> ttc_mean;

  friend bool operator==(const KpiAggregate &, const KpiAggregate &) = default;
};

/**
 * @brief Runs the AEB function against the scenario's static object.
 *
 * Stages per step:
 *  - perception (every `perception_tick`): the object is reported when its gap
 *    is within the effective perception range; a ghost is reported with
 *    probability `ghost_rate` at a uniform gap in [0, trigger distance].
 *  - decision (every step): detections of the latest frame are compensated for
 *    ego motion; the brake latches once the closest one is within the RSS
 *    distance computed with the effective response time.
 *  - actuation: full effective deceleration once the response time elapsed.
 *
 * Acceleration is piecewise constant over steps and integrated exactly, so
 * stop and impact instants are resolved inside a step.
 *
 * The result depends only on (scenario, cfg, seed).
 */
SimTrace simulate(const Scenario & scenario, const SimConfig & cfg, std::uint64_t seed);

/// Uses `scenario.seed`.
SimTrace simulate(const Scenario & scenario, const SimConfig & cfg);

/// @throws ContractViolation if the trace has no terminal state.
KpiReport compute_kpis(const SimTrace & trace, const Scenario & scenario);

KpiAggregate aggregate_kpis(
  std::string scenario_id, std::string odd_id, std::span<const KpiReport> reports);

/**
 * @brief Runs every scenario `runs_per_scenario` times; run i of a scenario
 * uses derive_seed(scenario.seed, i).
 *
 * @param workers thread count; 0 picks the hardware concurrency. The result
 *        does not depend on it.
 * @throws SimulationError naming the failing scenario.
 */
std::vector<KpiAggregate> monte_carlo_sweep(
  std::span<const Scenario> scenarios, const SimConfig & cfg, std::size_t runs_per_scenario,
  std::size_t workers = 0);

/// One JSON object per event and a final {"summary": ...} line.
std::string trace_to_jsonl(const SimTrace & trace, const KpiReport & kpis);

/// CSV with header scenario_id,runs,collision_rate,false_activation_rate,gap_mean,gap_min,gap_max,impact_speed_max
std::string kpi_aggregates_to_csv(std::span<const KpiAggregate> aggregates);

}  // namespace sotif

#endif  // SOTIF__SIMULATOR_HPP_
