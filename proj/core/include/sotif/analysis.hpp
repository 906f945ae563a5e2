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

#ifndef SOTIF__ANALYSIS_HPP_
#define SOTIF__ANALYSIS_HPP_

#include "sotif/scenario.hpp"
#include "sotif/simulator.hpp"

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sotif
{

enum class Severity { S0, S1, S2, S3 };
enum class Controllability { C0, C1, C2, C3 };
enum class Subsystem { perception_sense, perception_algo, decision, actuation };

using SubsystemSet = std::set<Subsystem>;

std::string_view to_string(Severity s);
std::string_view to_string(Controllability c);
std::string_view to_string(Subsystem s);
std::optional<Severity> parse_severity(std::string_view s);
std::optional<Controllability> parse_controllability(std::string_view s);
std::optional<Subsystem> parse_subsystem(std::string_view s);

/// KPI that evidences a hazard in a sweep.
enum class HazardIndicator { collision, false_activation, none };

struct Hazard
{
  std::string id;
  std::string description;
  Severity default_severity{Severity::S0};
  HazardIndicator indicator{HazardIndicator::none};

  friend bool operator==(const Hazard &, const Hazard &) = default;
};

inline constexpr std::string_view kCollisionHazard = "H1";
inline constexpr std::string_view kFalseActivationHazard = "H2";

/// Hazard list. Always contains H1 (collision, incomplete braking) and
/// H2 (false activation); user hazards must use other ids.
class HazardRegistry
{
public:
  HazardRegistry();

  /// @throws Error if the id is already registered.
  void add(Hazard hazard);
  const Hazard * find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  const std::vector<Hazard> & hazards() const noexcept { return hazards_; }

private:
  std::vector<Hazard> hazards_;
};

/// Severity of the observed outcome. Thresholds are on the worst impact speed.
struct SeverityRules
{
  double s3_min_impact_speed{11.0};  // [m/s]
  double s2_min_impact_speed{5.0};   // [m/s]
  Severity false_activation_severity{Severity::S1};

  void validate() const;
  Severity for_collision(double impact_speed_max) const;

  friend bool operator==(const SeverityRules &, const SeverityRules &) = default;
};

/// One line of the triggering conditions analysis sheet.
struct AnalysisRow
{
  std::string scenario_id;
  std::string leaf_id;
  std::string condition_name;
  std::vector<std::string> category_path;  // display names, root first
  SubsystemSet affected_subsystems;
  Severity severity{Severity::S0};
  Controllability controllability{Controllability::C3};
  std::vector<std::string> linked_hazard_ids;
  std::string rationale;

  friend bool operator==(const AnalysisRow &, const AnalysisRow &) = default;
};

/// Which stage of the function an effect model degrades.
SubsystemSet classify_affected_subsystems(const EffectModel & effects);

/// H1 when any run collided, H2 when any run braked on a ghost.
std::vector<std::string> link_hazards(const KpiAggregate & kpis, const HazardRegistry & registry);

/// Severity of one hazard given the sweep outcome.
Severity hazard_severity(
  const KpiAggregate & kpis, const Hazard & hazard, const SeverityRules & rules);

/**
 * @brief One row per non-nominal scenario.
 * @throws IncompleteAnalysisError if a scenario has no sweep result.
 */
std::vector<AnalysisRow> build_analysis_sheet(
  std::span<const Scenario> scenarios, std::span<const KpiAggregate> sweeps,
  const HazardRegistry & registry, const SeverityRules & rules,
  Controllability controllability = Controllability::C3);

/// Columns: triggering_condition,category_path,affected_subsystems,severity,controllability,hazards,rationale
std::string analysis_sheet_to_csv(std::span<const AnalysisRow> rows);

}  // namespace sotif

#endif  // SOTIF__ANALYSIS_HPP_
