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

#ifndef SOTIF__SCENARIO_HPP_
#define SOTIF__SCENARIO_HPP_

#include "sotif/core_model.hpp"
#include "sotif/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sotif
{

/// One-way road with a static object at the end of the driving path.
struct OddDefinition
{
  std::string id;
  double d_object{0.0};      // [m] initial distance to the object
  double d_perception{0.0};  // [m] nominal sensor range
  double mu{1.0};            // normalized road friction in (0, 1]
  TagSet odd_tags;
  VehicleParams vehicle;

  /// Throws ParameterDomainError on out-of-range fields.
  void validate() const;

  /// Human-readable list of violated nominal conditions
  /// (d_perception > d_object, d_perception > RSS distance). Empty when well formed.
  std::vector<std::string> nominal_violations() const;
  bool nominally_well_formed() const { return nominal_violations().empty(); }

  friend bool operator==(const OddDefinition &, const OddDefinition &) = default;
};

/// Physical impact of a triggering condition on the function.
struct EffectModel
{
  double perception_range_factor{1.0};  // (0, 1]
  double ghost_rate{0.0};               // false detections per perception frame, [0, 1]
  double mu_factor{1.0};                // (0, 1]
  double rho_add{0.0};                  // extra response delay [s], >= 0
  bool perception_algo{false};          // explicit flag: the object extraction stage is affected

  static EffectModel neutral() { return {}; }
  bool is_neutral() const { return *this == neutral(); }
  void validate() const;

  friend bool operator==(const EffectModel &, const EffectModel &) = default;
};

/// EffectModel with optional fields; unset fields fall back to a base model.
struct PartialEffect
{
  std::optional<double> perception_range_factor;
  std::optional<double> ghost_rate;
  std::optional<double> mu_factor;
  std::optional<double> rho_add;
  std::optional<bool> perception_algo;

  EffectModel over(const EffectModel & base) const;
  bool empty() const;

  friend bool operator==(const PartialEffect &, const PartialEffect &) = default;
};

/// Condition -> effect lookup. The most specific entry wins:
/// `by_leaf`, then the deepest ancestor in `by_category`, then `defaults`.
struct EffectMapping
{
  std::optional<PartialEffect> defaults;
  std::map<std::string, PartialEffect> by_leaf;
  std::map<std::string, PartialEffect> by_category;  // keyed by category id
};

struct Scenario
{
  std::string id;
  OddDefinition odd;
  std::optional<TriggeringCondition> condition;  // absent: nominal scenario
  EffectModel effects;
  std::uint64_t seed{0};
  std::vector<std::string> mitigations;  // ids of applied mitigations, in order

  bool is_nominal() const { return !condition.has_value(); }

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

struct PartialVehicleParams
{
  std::optional<double> v_r;
  std::optional<double> rho;
  std::optional<double> a_max_accel;
  std::optional<double> a_min_brake;

  friend bool operator==(const PartialVehicleParams &, const PartialVehicleParams &) = default;
};

/// Counter-measure that moves a scenario toward the nominal behaviour.
/// Vehicle overrides may lower v_r or rho and raise a_min_brake or a_max_accel.
struct MitigationSpec
{
  std::string id;
  std::string description;
  std::vector<std::string> applies_to;  // condition leaf ids
  PartialEffect effect_overrides;
  PartialVehicleParams vehicle_overrides;

  /// Range checks only; direction checks need the target scenario.
  void validate() const;

  friend bool operator==(const MitigationSpec &, const MitigationSpec &) = default;
};

/// Inputs the simulator actually runs with, after applying the effect model.
struct EffectiveParams
{
  VehicleParams vehicle;     // rho includes rho_add
  double perception_range;   // [m]
  double ghost_rate;
  double friction;           // mu * mu_factor
  double brake_decel;        // [m/s^2]
  double trigger_distance;   // RSS distance with the effective response time
};

inline constexpr std::string_view kNominalScenarioId = "nominal";

EffectModel resolve_effects(const TriggeringCondition & condition, const EffectMapping & mapping);

/// 1 nominal scenario followed by one scenario per condition, in input order.
std::vector<Scenario> generate_scenarios(
  const OddDefinition & odd, std::span<const TriggeringCondition> conditions,
  const EffectMapping & mapping, std::uint64_t base_seed);

/**
 * @brief Applies `m` to `scenario`. The result keeps the seed (so runs stay
 * matched) and gets the id `<scenario id>+<mitigation id>`.
 * @throws InvalidMitigationError if any override moves a field away from neutral.
 */
Scenario apply_mitigation(const Scenario & scenario, const MitigationSpec & m);

EffectiveParams effective_parameters(const Scenario & scenario);

std::uint64_t derive_seed(std::uint64_t base, std::string_view key);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Input documents. All throw DocumentError with the JSON pointer of the problem.
OddDefinition parse_odd(std::string_view document);
OddDefinition load_odd(const std::filesystem::path & path);
EffectMapping parse_effect_mapping(std::string_view document);
EffectMapping load_effect_mapping(const std::filesystem::path & path);
std::vector<MitigationSpec> parse_mitigations(std::string_view document);
std::vector<MitigationSpec> load_mitigations(const std::filesystem::path & path);

}  // namespace sotif

#endif  // SOTIF__SCENARIO_HPP_
