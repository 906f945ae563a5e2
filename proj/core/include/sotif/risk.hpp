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

#ifndef SOTIF__RISK_HPP_
#define SOTIF__RISK_HPP_

#include "sotif/analysis.hpp"
#include "sotif/scenario.hpp"
#include "sotif/simulator.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sotif
{

enum class OccurrenceClass { O1, O2, O3, O4 };
enum class RiskLevel { negligible, low, medium, high };

std::string_view to_string(OccurrenceClass o);
std::string_view to_string(RiskLevel r);
std::optional<OccurrenceClass> parse_occurrence_class(std::string_view s);
std::optional<RiskLevel> parse_risk_level(std::string_view s);

/// How often a triggering condition is encountered in operation. Input data,
/// never estimated by the tool.
struct OccurrenceSpec
{
  std::string leaf_id;
  double exposure_rate{0.0};  // encounters per operating hour
  std::string source;

  void validate() const;

  friend bool operator==(const OccurrenceSpec &, const OccurrenceSpec &) = default;
};

/// Lower bounds (per hour) of the occurrence classes O4, O3 and O2.
struct OccurrenceBins
{
  double o4_min{1e-1};
  double o3_min{1e-3};
  double o2_min{1e-5};

  void validate() const;
  OccurrenceClass classify(double rate_per_hour) const;

  friend bool operator==(const OccurrenceBins &, const OccurrenceBins &) = default;
};

/// R = f(S, O) as a lookup table indexed [severity][occurrence].
///
/// Default:
///
///          O1          O2          O3          O4
///   S0  negligible  negligible  negligible  negligible
///   S1  negligible  negligible  low         low
///   S2  negligible  low         low         medium
///   S3  low         low         medium      high
class RiskMatrix
{
public:
  using Table = std::array<std::array<RiskLevel, 4>, 4>;

  RiskMatrix();
  /// @throws ParameterDomainError unless the table is nondecreasing along both axes.
  explicit RiskMatrix(const Table & table);

  RiskLevel at(Severity s, OccurrenceClass o) const;
  const Table & table() const noexcept { return table_; }
  static bool is_monotone(const Table & table);

  friend bool operator==(const RiskMatrix &, const RiskMatrix &) = default;

private:
  Table table_;
};

RiskLevel risk_level(Severity s, OccurrenceClass o);
RiskLevel risk_level(Severity s, OccurrenceClass o, const RiskMatrix & matrix);

struct HazardRate
{
  double rate_per_hour{0.0};
  std::optional<double> hours_to_hazard;  // nullopt: unbounded
};

/// rate = exposure_rate * P(hazard | condition).
HazardRate hazard_rate(const OccurrenceSpec & occurrence, double conditional_hazard_prob);

struct RiskResult
{
  std::string scenario_id;
  std::string leaf_id;
  std::string hazard_id;  // empty when the row links no hazard
  Severity severity{Severity::S0};
  OccurrenceClass occurrence_class{OccurrenceClass::O1};
  RiskLevel risk_level{RiskLevel::negligible};
  double hazard_rate_per_hour{0.0};
  std::optional<double> hours_to_hazard;
  std::optional<double> km_to_hazard;

  friend bool operator==(const RiskResult &, const RiskResult &) = default;
};

struct AcceptanceCriteria
{
  double max_final_gap_degradation{0.0};  // fraction of the nominal worst-case gap
  double max_collision_rate{0.0};
  double max_false_activation_rate{0.0};
  double min_ttc_at_trigger{0.0};  // [s]

  void validate() const;

  friend bool operator==(const AcceptanceCriteria &, const AcceptanceCriteria &) = default;
};

struct ClauseViolation
{
  std::string clause;
  double measured{0.0};
  double threshold{0.0};

  friend bool operator==(const ClauseViolation &, const ClauseViolation &) = default;
};

struct AcceptanceVerdict
{
  std::string scenario_id;
  bool pass{true};
  std::vector<ClauseViolation> violations;
  std::vector<std::string> hazard_ids;  // hazards evidenced by the scenario

  friend bool operator==(const AcceptanceVerdict &, const AcceptanceVerdict &) = default;
};

/// Relative loss of the worst-case final gap against the nominal one, >= 0.
double final_gap_degradation(const KpiAggregate & nominal, const KpiAggregate & scenario);

/**
 * @brief Compares a scenario's KPIs with the nominal ones of the same ODD.
 *
 * Runs that never triggered have no TTC and do not count against
 * `min_ttc_at_trigger`.
 *
 * @throws InvalidComparisonError if the ODD ids differ.
 */
AcceptanceVerdict acceptance_check(
  const KpiAggregate & nominal, const KpiAggregate & scenario, const AcceptanceCriteria & criteria);

/**
 * @brief One RiskResult per (row, linked hazard); rows without a hazard give a
 * single negligible entry with an empty hazard id.
 *
 * @throws IncompleteOccurrenceError when a row's leaf has no occurrence entry.
 * @throws IncompleteAnalysisError when a row has no sweep or scenario.
 */
std::vector<RiskResult> evaluate_residual_risk(
  std::span<const AnalysisRow> sheet, std::span<const KpiAggregate> sweeps,
  std::span<const OccurrenceSpec> occurrences, std::span<const Scenario> scenarios,
  const HazardRegistry & registry, const SeverityRules & rules,
  const OccurrenceBins & bins = {}, const RiskMatrix & matrix = {});

/// Columns: scenario,hazard,S,O_class,risk,rate_per_hour,hours_to_hazard,km_to_hazard
std::string risk_results_to_csv(std::span<const RiskResult> results);

std::vector<OccurrenceSpec> parse_occurrences(std::string_view document);
std::vector<OccurrenceSpec> load_occurrences(const std::filesystem::path & path);
AcceptanceCriteria parse_criteria(std::string_view document);
AcceptanceCriteria load_criteria(const std::filesystem::path & path);

}  // namespace sotif

#endif  // SOTIF__RISK_HPP_
