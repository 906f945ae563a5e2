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

// Closed-form reference values computed without the library, plus the
// shared scenario builders used by the unit and acceptance tests.

#ifndef SOTIF_TEST__ORACLES_HPP_
#define SOTIF_TEST__ORACLES_HPP_

#include "sotif/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace sotif::test
{

// 50 km/h, rho = 1 s, 2.0 m/s^2 worst-case acceleration, 5.0 m/s^2 braking.
inline constexpr double kRefSpeed = 50.0 / 3.6;
inline constexpr double kRefRho = 1.0;
inline constexpr double kRefAccel = 2.0;
inline constexpr double kRefBrake = 5.0;

namespace oracle
{

/// Term-by-term minimum distance: travel during rho, the acceleration
/// contribution during rho, then braking from the worst-case speed.
inline double rss(double v, double rho, double a_acc, double a_brk)
{
  const double travel = v * rho;
  const double accel_extra = 0.5 * a_acc * rho * rho;
  const double v_worst = v + rho * a_acc;
  const double braking = v_worst * v_worst / (2.0 * a_brk);
  const double total = travel + accel_extra + braking;
  return total > 0.0 ? total : 0.0;
}

inline double reaction_distance(double v, double rho) { return v * rho; }

inline double braking_distance(double v, double decel) { return v * v / (2.0 * decel); }

inline double stopping_distance(double v, double rho, double decel)
{
  return reaction_distance(v, rho) + braking_distance(v, decel);
}

/// Remaining gap after braking from the trigger distance with constant speed
/// during the response time. Negative means the obstacle is reached.
inline double final_gap(double trigger_gap, double v, double rho, double decel)
{
  return trigger_gap - stopping_distance(v, rho, decel);
}

/// Speed at the obstacle when braking starts `trigger_gap - v*rho` before it.
inline double impact_speed(double trigger_gap, double v, double rho, double decel)
{
  const double braking_room = trigger_gap - v * rho;
  const double v2 = v * v - 2.0 * decel * braking_room;
  return v2 > 0.0 ? std::sqrt(v2) : 0.0;
}

/// P(at least one ghost in n independent frames).
inline double false_activation_probability(double ghost_rate, int n)
{
  return 1.0 - std::pow(1.0 - ghost_rate, n);
}

/// Standard deviation of a binomial frequency over `runs` trials.
inline double binomial_sigma(double p, int runs) { return std::sqrt(p * (1.0 - p) / runs); }

}  // namespace oracle

inline VehicleParams reference_vehicle()
{
  VehicleParams v;
  v.v_r = kRefSpeed;
  v.rho = kRefRho;
  v.a_max_accel = kRefAccel;
  v.a_min_brake = kRefBrake;
  return v;
}

inline OddDefinition reference_odd()
{
  OddDefinition odd;
  odd.id = "reference-odd";
  odd.d_object = 100.0;
  odd.d_perception = 80.0;
  odd.mu = 1.0;
  odd.odd_tags = {"static-object", "weather", "road-surface"};
  odd.vehicle = reference_vehicle();
  return odd;
}

inline Scenario nominal_scenario(std::uint64_t seed = 7)
{
  Scenario s;
  s.id = std::string(kNominalScenarioId);
  s.odd = reference_odd();
  s.effects = EffectModel::neutral();
  s.seed = seed;
  return s;
}

/// A condition scenario with the given effects on the reference ODD.
inline Scenario condition_scenario(
  const std::string & leaf_id, const EffectModel & effects, std::uint64_t seed = 7)
{
  Scenario s = nominal_scenario(seed);
  s.id = leaf_id;
  TriggeringCondition c;
  c.leaf_id = leaf_id;
  c.leaf_name = leaf_id;
  c.category_path = {"environmental-conditions"};
  c.category_names = {"Environmental conditions"};
  c.odd_tags = {"weather"};
  s.condition = c;
  s.effects = effects;
  return s;
}

}  // namespace sotif::test

#endif  // SOTIF_TEST__ORACLES_HPP_
