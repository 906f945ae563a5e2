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

#include "sotif/simulator.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"
#include "sotif/json_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

namespace sotif
{

namespace
{

struct Detection
{
  double position;  // world frame [m]
  bool ghost;
};

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64 & rng)
{
  return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

std::size_t steps_for(double duration, double dt)
{
  return static_cast<std::size_t>(std::llround(duration / dt));
}

void check_finite(double x, double v, double t, const char * where)
{
  if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << "non-finite state in " << where << ": position=" << x << " velocity=" << v
        << " time=" << t;
    throw IntegrationError(msg.str());
  }
}

}  // namespace

void SimConfig::validate() const
{
  const bool finite = std::isfinite(dt) && std::isfinite(max_time) && std::isfinite(perception_tick);
  if (!finite || !(dt > 0.0) || !(dt <= perception_tick) || !(perception_tick <= max_time)) {
    throw ParameterDomainError("SimConfig requires 0 < dt <= perception_tick <= max_time");
  }
}

std::string_view to_string(Stage stage)
{
  switch (stage) {
    case Stage::perception_sense:
      return "perception_sense";
    case Stage::perception_algo:
      return "perception_algo";
    case Stage::decision:
      return "decision";
    case Stage::actuation:
      return "actuation";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind)
{
  switch (kind) {
    case EventKind::object_detected:
      return "object_detected";
    case EventKind::ghost_detected:
      return "ghost_detected";
    case EventKind::brake_triggered:
      return "brake_triggered";
    case EventKind::brake_effective:
      return "brake_effective";
    case EventKind::stopped:
      return "stopped";
    case EventKind::collision:
      return "collision";
  }
  return "unknown";
}

std::string_view to_string(Terminal terminal)
{
  switch (terminal) {
    case Terminal::stopped:
      return "stopped";
    case Terminal::collision:
      return "collision";
    case Terminal::timeout:
      return "timeout";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(std::string_view s)
{
  for (auto v : {Stage::perception_sense, Stage::perception_algo, Stage::decision, Stage::actuation}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<EventKind> parse_event_kind(std::string_view s)
{
  for (auto v :
       {EventKind::object_detected, EventKind::ghost_detected, EventKind::brake_triggered,
        EventKind::brake_effective, EventKind::stopped, EventKind::collision}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Terminal> parse_terminal(std::string_view s)
{
  for (auto v : {Terminal::stopped, Terminal::collision, Terminal::timeout}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

SimTrace simulate(const Scenario & scenario, const SimConfig & cfg)
{
  return simulate(scenario, cfg, scenario.seed);
}

SimTrace simulate(const Scenario & scenario, const SimConfig & cfg, std::uint64_t seed)
{
  cfg.validate();
  const EffectiveParams p = effective_parameters(scenario);
  const double object = scenario.odd.d_object;
  const double dt = cfg.dt;
  const std::size_t tick_steps = std::max<std::size_t>(1, steps_for(cfg.perception_tick, dt));
  const std::size_t max_steps = std::max<std::size_t>(1, steps_for(cfg.max_time, dt));
  // response delay rounded up to whole steps; the 1e-9 absorbs representation error of rho/dt
  const auto delay_steps =
    static_cast<std::size_t>(std::max(0.0, std::ceil(p.vehicle.rho / dt - 1e-9)));

  SimTrace trace;
  trace.scenario_id = scenario.id;
  trace.seed = seed;

  std::mt19937_64 rng(seed);
  double x = 0.0;
  double v = p.vehicle.v_r;
  double accel = 0.0;  // deceleration magnitude currently applied

  auto emit = [&](double t, Stage stage, EventKind kind, double velocity,
                  std::optional<double> perceived = std::nullopt) {
    trace.events.push_back(SimEvent{t, stage, kind, object - x, velocity, perceived});
  };

  if (v == 0.0) {
    trace.states.push_back(KinematicState{x, v, 0.0});
    emit(0.0, Stage::actuation, EventKind::stopped, 0.0);
    trace.terminal = Terminal::stopped;
    return trace;
  }

  std::vector<Detection> frame;
  bool object_seen = false;
  bool triggered = false;
  bool braking = false;
  std::size_t trigger_step = 0;

  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    if (n >= max_steps) {
      trace.states.push_back(KinematicState{x, v, t});
      trace.terminal = Terminal::timeout;
      return trace;
    }

    // perception: sense + algo
    if (n % tick_steps == 0) {
      trace.states.push_back(KinematicState{x, v, t});
      frame.clear();
      // both draws happen on every frame so streams stay aligned across ghost rates
      const double u_ghost = unit_uniform(rng);
      const double u_gap = unit_uniform(rng);
      if (object - x <= p.perception_range) {
        frame.push_back(Detection{object, false});
        if (!object_seen) {
          object_seen = true;
          emit(t, Stage::perception_algo, EventKind::object_detected, v, object - x);
        }
      }
      if (u_ghost < p.ghost_rate) {
        const double ghost_gap = u_gap * p.trigger_distance;
        frame.push_back(Detection{x + ghost_gap, true});
        emit(t, Stage::perception_sense, EventKind::ghost_detected, v, ghost_gap);
      }
    }

    // decision: latching trigger on the closest motion-compensated detection
    if (!triggered && !frame.empty()) {
      double closest = std::numeric_limits<double>::infinity();
      for (const auto & d : frame) {
        closest = std::min(closest, d.position - x);
      }
      if (closest <= p.trigger_distance) {
        triggered = true;
        trigger_step = n;
        emit(t, Stage::decision, EventKind::brake_triggered, v, closest);
      }
    }

    // actuation
    if (triggered && !braking && n - trigger_step >= delay_steps) {
      braking = true;
      accel = p.brake_decel;
      emit(t, Stage::actuation, EventKind::brake_effective, v);
    }

    // integrate [t, t + dt] under constant deceleration `accel`
    const double remaining = object - x;
    if (accel > 0.0 && v - accel * dt <= 0.0) {
      const double tau = v / accel;
      const double dx = 0.5 * v * tau;
      if (dx > remaining) {
        const double v_impact = std::sqrt(std::max(0.0, v * v - 2.0 * accel * remaining));
        const double t_impact = t + (v - v_impact) / accel;
        x = object;
        check_finite(x, v_impact, t_impact, "impact");
        trace.states.push_back(KinematicState{x, v_impact, t_impact});
        emit(t_impact, Stage::actuation, EventKind::collision, v_impact);
        trace.terminal = Terminal::collision;
        return trace;
      }
      x += dx;
      v = 0.0;
      check_finite(x, v, t + tau, "stop");
      trace.states.push_back(KinematicState{x, v, t + tau});
      emit(t + tau, Stage::actuation, EventKind::stopped, 0.0);
      trace.terminal = Terminal::stopped;
      return trace;
    }

    const double dx = v * dt - 0.5 * accel * dt * dt;
    if (dx >= remaining) {
      double v_impact = v;
      double t_impact = t + remaining / v;
      if (accel > 0.0) {
        v_impact = std::sqrt(std::max(0.0, v * v - 2.0 * accel * remaining));
        t_impact = t + (v - v_impact) / accel;
      }
      x = object;
      check_finite(x, v_impact, t_impact, "impact");
      trace.states.push_back(KinematicState{x, v_impact, t_impact});
      emit(t_impact, Stage::actuation, EventKind::collision, v_impact);
      trace.terminal = Terminal::collision;
      return trace;
    }
    x += dx;
    v -= accel * dt;
    check_finite(x, v, t + dt, "integration");
  }
}

KpiReport compute_kpis(const SimTrace & trace, const Scenario & scenario)
{
  if (!trace.terminal) {
    throw ContractViolation("trace of '" + trace.scenario_id + "' has no terminal state");
  }
  if (trace.states.empty()) {
    throw ContractViolation("trace of '" + trace.scenario_id + "' has no states");
  }
  const EffectiveParams p = effective_parameters(scenario);

  KpiReport k;
  k.terminal = *trace.terminal;
  const SimEvent * trigger = nullptr;
  const SimEvent * effective = nullptr;
  const SimEvent * impact = nullptr;
  for (const auto & e : trace.events) {
    if (e.kind == EventKind::brake_triggered && !trigger) trigger = &e;
    if (e.kind == EventKind::brake_effective && !effective) effective = &e;
    if (e.kind == EventKind::collision) impact = &e;
  }

  k.collision = k.terminal == Terminal::collision;
  if (k.collision) {
    if (!impact) {
      throw ContractViolation("collision trace of '" + trace.scenario_id + "' lacks the event");
    }
    k.impact_speed = impact->velocity;
    k.final_gap = 0.0;
  } else {
    k.final_gap = std::max(0.0, scenario.odd.d_object - trace.states.back().position);
  }

  if (trigger) {
    k.brake_triggered = true;
    k.ttc_at_trigger = ttc(std::max(0.0, trigger->gap), trigger->velocity, 0.0);
    // a ghost reported in the same frame and no real object inside the RSS distance
    // (ghost events and the trigger they cause are stamped with the same step time)
    const bool ghost_in_frame = std::any_of(
      trace.events.begin(), trace.events.end(), [&](const SimEvent & e) {
        return e.kind == EventKind::ghost_detected && e.time == trigger->time;
      });
    k.false_activation = ghost_in_frame && trigger->gap > p.trigger_distance;

    const double gap_at_brake = effective ? effective->gap : k.final_gap;
    k.d_rho_observed = trigger->gap - gap_at_brake;
    k.d_act_observed = effective ? effective->gap - k.final_gap : 0.0;
  }
  return k;
}

KpiAggregate aggregate_kpis(
  std::string scenario_id, std::string odd_id, std::span<const KpiReport> reports)
{
  KpiAggregate a;
  a.scenario_id = std::move(scenario_id);
  a.odd_id = std::move(odd_id);
  a.runs = reports.size();
  if (reports.empty()) {
    return a;
  }
  std::size_t collisions = 0;
  std::size_t false_activations = 0;
  std::size_t triggers = 0;
  std::size_t ttc_count = 0;
  double gap_sum = 0.0;
  double impact_sum = 0.0;
  double ttc_sum = 0.0;
  a.gap_min = a.impact_speed_min = std::numeric_limits<double>::infinity();
  a.gap_max = a.impact_speed_max = -std::numeric_limits<double>::infinity();
  for (const auto & r : reports) {
    collisions += r.collision ? 1 : 0;
    false_activations += r.false_activation ? 1 : 0;
    triggers += r.brake_triggered ? 1 : 0;
    gap_sum += r.final_gap;
    impact_sum += r.impact_speed;
    a.gap_min = std::min(a.gap_min, r.final_gap);
    a.gap_max = std::max(a.gap_max, r.final_gap);
    a.impact_speed_min = std::min(a.impact_speed_min, r.impact_speed);
    a.impact_speed_max = std::max(a.impact_speed_max, r.impact_speed);
    if (r.ttc_at_trigger) {
      ++ttc_count;
      ttc_sum += *r.ttc_at_trigger;
      a.ttc_min = a.ttc_min ? std::min(*a.ttc_min, *r.ttc_at_trigger) : *r.ttc_at_trigger;
    }
  }
  const auto n = static_cast<double>(reports.size());
  a.collision_rate = static_cast<double>(collisions) / n;
  a.false_activation_rate = static_cast<double>(false_activations) / n;
  a.trigger_rate = static_cast<double>(triggers) / n;
  // Summation rounding can push a mean just past the extremes.
  a.gap_mean = std::clamp(gap_sum / n, a.gap_min, a.gap_max);
  a.impact_speed_mean = std::clamp(impact_sum / n, a.impact_speed_min, a.impact_speed_max);
  if (ttc_count > 0) {
    double ttc_max = -std::numeric_limits<double>::infinity();
    for (const auto & r : reports) {
      if (r.ttc_at_trigger) ttc_max = std::max(ttc_max, *r.ttc_at_trigger);
    }
    a.ttc_mean = std::clamp(ttc_sum / static_cast<double>(ttc_count), *a.ttc_min, ttc_max);
  }
  return a;
}

std::vector<KpiAggregate> monte_carlo_sweep(
  std::span<const Scenario> scenarios, const SimConfig & cfg, std::size_t runs_per_scenario,
  std::size_t workers)
{
  if (runs_per_scenario < 1) {
    throw ParameterDomainError("runs_per_scenario must be >= 1");
  }
  cfg.validate();
  if (scenarios.empty()) {
    return {};
  }

  const std::size_t total = scenarios.size() * runs_per_scenario;
  std::vector<KpiReport> reports(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
      const Scenario & s = scenarios[job / runs_per_scenario];
      const std::uint64_t run = job % runs_per_scenario;
      try {
        reports[job] = compute_kpis(simulate(s, cfg, derive_seed(s.seed, run)), s);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  if (workers == 0) {
    workers = std::max(1U, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, total);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) {
      pool.emplace_back(work);
    }
  }

  for (std::size_t job = 0; job < total; ++job) {
    if (errors[job]) {
      const std::string & id = scenarios[job / runs_per_scenario].id;
      try {
        std::rethrow_exception(errors[job]);
      } catch (const std::exception & e) {
        throw SimulationError(id, e.what());
      }
    }
  }

  std::vector<KpiAggregate> out;
  out.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    out.push_back(aggregate_kpis(
      scenarios[i].id, scenarios[i].odd.id,
      std::span<const KpiReport>(reports).subspan(i * runs_per_scenario, runs_per_scenario)));
  }
  return out;
}

std::string trace_to_jsonl(const SimTrace & trace, const KpiReport & kpis)
{
  std::string out;
  for (const auto & e : trace.events) {
    out += nlohmann::json(e).dump();
    out += '\n';
  }
  nlohmann::json summary;
  summary["scenario_id"] = trace.scenario_id;
  summary["seed"] = trace.seed;
  summary["terminal"] = trace.terminal ? nlohmann::json(to_string(*trace.terminal)) : nlohmann::json(nullptr);
  summary["kpis"] = kpis;
  summary["states"] = trace.states;
  out += nlohmann::json{{"summary", summary}}.dump();
  out += '\n';
  return out;
}

std::string kpi_aggregates_to_csv(std::span<const KpiAggregate> aggregates)
{
  using detail::format_double;
  std::string out =
    "scenario_id,runs,collision_rate,false_activation_rate,gap_mean,gap_min,gap_max,"
    "impact_speed_max\n";
  for (const auto & a : aggregates) {
    out += detail::csv_escape(a.scenario_id) + "," + std::to_string(a.runs) + "," +
           format_double(a.collision_rate) + "," + format_double(a.false_activation_rate) + "," +
           format_double(a.gap_mean) + "," + format_double(a.gap_min) + "," +
           format_double(a.gap_max) + "," + format_double(a.impact_speed_max) + "\n";
  }
  return out;
}

}  // namespace sotif
