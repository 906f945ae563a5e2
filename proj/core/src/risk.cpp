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

#include "sotif/risk.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace sotif
{

namespace
{

using RL = RiskLevel;

constexpr RiskMatrix::Table kDefaultTable{{
  {RL::negligible, RL::negligible, RL::negligible, RL::negligible},
  {RL::negligible, RL::negligible, RL::low, RL::low},
  {RL::negligible, RL::low, RL::low, RL::medium},
  {RL::low, RL::low, RL::medium, RL::high},
}};

constexpr double kMetersPerSecondToKmPerHour = 3.6;

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(OccurrenceClass o)
{
  static constexpr std::string_view names[] = {"O1", "O2", "O3", "O4"};
  return names[static_cast<int>(o)];
}

std::string_view to_string(RiskLevel r)
{
  static constexpr std::string_view names[] = {"negligible", "low", "medium", "high"};
  return names[static_cast<int>(r)];
}

std::optional<OccurrenceClass> parse_occurrence_class(std::string_view s)
{
  for (auto v : {OccurrenceClass::O1, OccurrenceClass::O2, OccurrenceClass::O3, OccurrenceClass::O4}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<RiskLevel> parse_risk_level(std::string_view s)
{
  for (auto v : {RL::negligible, RL::low, RL::medium, RL::high}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

void OccurrenceSpec::validate() const
{
  if (leaf_id.empty()) {
    throw ParameterDomainError("occurrence entry without leaf_id");
  }
  if (!std::isfinite(exposure_rate) || exposure_rate < 0.0) {
    throw ParameterDomainError("exposure_rate of '" + leaf_id + "' must be finite and >= 0");
  }
}

void OccurrenceBins::validate() const
{
  if (!(std::isfinite(o4_min) && o2_min > 0.0 && o2_min <= o3_min && o3_min <= o4_min)) {
    throw ParameterDomainError("occurrence bins require 0 < o2_min <= o3_min <= o4_min");
  }
}

OccurrenceClass OccurrenceBins::classify(double rate_per_hour) const
{
  if (rate_per_hour >= o4_min) return OccurrenceClass::O4;
  if (rate_per_hour >= o3_min) return OccurrenceClass::O3;
  if (rate_per_hour >= o2_min) return OccurrenceClass::O2;
  return OccurrenceClass::O1;
}

RiskMatrix::RiskMatrix() : table_(kDefaultTable) {}

RiskMatrix::RiskMatrix(const Table & table) : table_(table)
{
  if (!is_monotone(table)) {
    throw ParameterDomainError("risk matrix must be nondecreasing in severity and occurrence");
  }
}

bool RiskMatrix::is_monotone(const Table & table)
{
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t o = 0; o < 4; ++o) {
      if (s > 0 && table[s][o] < table[s - 1][o]) return false;
      if (o > 0 && table[s][o] < table[s][o - 1]) return false;
    }
  }
  return true;
}

RiskLevel RiskMatrix::at(Severity s, OccurrenceClass o) const
{
  return table_[static_cast<std::size_t>(s)][static_cast<std::size_t>(o)];
}

RiskLevel risk_level(Severity s, OccurrenceClass o) { return RiskMatrix{}.at(s, o); }

RiskLevel risk_level(Severity s, OccurrenceClass o, const RiskMatrix & matrix)
{
  return matrix.at(s, o);
}

HazardRate hazard_rate(const OccurrenceSpec & occurrence, double conditional_hazard_prob)
{
  occurrence.validate();
  if (!is_probability(conditional_hazard_prob)) {
    throw ParameterDomainError("conditional hazard probability must lie in [0, 1]");
  }
  HazardRate r;
  r.rate_per_hour = occurrence.exposure_rate * conditional_hazard_prob;
  if (r.rate_per_hour > 0.0) {
    r.hours_to_hazard = 1.0 / r.rate_per_hour;
  }
  return r;
}

void AcceptanceCriteria::validate() const
{
  if (
    !std::isfinite(max_final_gap_degradation) || max_final_gap_degradation < 0.0 ||
    !is_probability(max_collision_rate) || !is_probability(max_false_activation_rate) ||
    !std::isfinite(min_ttc_at_trigger) || min_ttc_at_trigger < 0.0) {
    throw ParameterDomainError(
      "acceptance criteria need finite non-negative thresholds and rates in [0, 1]");
  }
}

double final_gap_degradation(const KpiAggregate & nominal, const KpiAggregate & scenario)
{
  if (nominal.gap_min > 0.0) {
    return std::max(0.0, (nominal.gap_min - scenario.gap_min) / nominal.gap_min);
  }
  return scenario.gap_min < nominal.gap_min ? std::numeric_limits<double>::infinity() : 0.0;
}

AcceptanceVerdict acceptance_check(
  const KpiAggregate & nominal, const KpiAggregate & scenario, const AcceptanceCriteria & criteria)
{
  criteria.validate();
  if (nominal.odd_id != scenario.odd_id) {
    throw InvalidComparisonError(
      "cannot compare '" + scenario.scenario_id + "' (ODD '" + scenario.odd_id +
      "') with nominal KPIs of ODD '" + nominal.odd_id + "'");
  }
  AcceptanceVerdict v;
  v.scenario_id = scenario.scenario_id;
  const double degradation = final_gap_degradation(nominal, scenario);
  if (degradation > criteria.max_final_gap_degradation) {
    v.violations.push_back({"max_final_gap_degradation", degradation, criteria.max_final_gap_degradation});
  }
  if (scenario.collision_rate > criteria.max_collision_rate) {
    v.violations.push_back({"max_collision_rate", scenario.collision_rate, criteria.max_collision_rate});
  }
  if (scenario.false_activation_rate > criteria.max_false_activation_rate) {
    v.violations.push_back(
      {"max_false_activation_rate", scenario.false_activation_rate, criteria.max_false_activation_rate});
  }
  if (scenario.ttc_min && *scenario.ttc_min < criteria.min_ttc_at_trigger) {
    v.violations.push_back({"min_ttc_at_trigger", *scenario.ttc_min, criteria.min_ttc_at_trigger});
  }
  v.pass = v.violations.empty();
  return v;
}

std::vector<RiskResult> evaluate_residual_risk(
  std::span<const AnalysisRow> sheet, std::span<const KpiAggregate> sweeps,
  std::span<const OccurrenceSpec> occurrences, std::span<const Scenario> scenarios,
  const HazardRegistry & registry, const SeverityRules & rules, const OccurrenceBins & bins,
  const RiskMatrix & matrix)
{
  bins.validate();
  std::map<std::string_view, const KpiAggregate *> sweep_by_id;
  for (const auto & s : sweeps) sweep_by_id.emplace(s.scenario_id, &s);
  std::map<std::string_view, const OccurrenceSpec *> occ_by_leaf;
  for (const auto & o : occurrences) occ_by_leaf.emplace(o.leaf_id, &o);
  std::map<std::string_view, const Scenario *> scenario_by_id;
  for (const auto & s : scenarios) scenario_by_id.emplace(s.id, &s);

  std::vector<RiskResult> out;
  for (const auto & row : sheet) {
    const auto sw = sweep_by_id.find(row.scenario_id);
    if (sw == sweep_by_id.end()) {
      throw IncompleteAnalysisError("no sweep result for scenario '" + row.scenario_id + "'");
    }
    const auto sc = scenario_by_id.find(row.scenario_id);
    if (sc == scenario_by_id.end()) {
      throw IncompleteAnalysisError("unknown scenario '" + row.scenario_id + "'");
    }
    const auto occ = occ_by_leaf.find(row.leaf_id);
    if (occ == occ_by_leaf.end()) {
      throw IncompleteOccurrenceError(row.leaf_id);
    }
    const KpiAggregate & kpis = *sw->second;
    const double v_r = sc->second->odd.vehicle.v_r;

    RiskResult base;
    base.scenario_id = row.scenario_id;
    base.leaf_id = row.leaf_id;
    base.occurrence_class = bins.classify(occ->second->exposure_rate);

    if (row.linked_hazard_ids.empty()) {
      base.risk_level = matrix.at(Severity::S0, base.occurrence_class);
      out.push_back(base);
      continue;
    }
    for (const auto & hazard_id : row.linked_hazard_ids) {
      const Hazard * hazard = registry.find(hazard_id);
      if (!hazard) {
        throw IncompleteAnalysisError("row '" + row.scenario_id + "' links unknown hazard '" + hazard_id + "'");
      }
      double probability = 0.0;
      if (hazard->indicator == HazardIndicator::collision) probability = kpis.collision_rate;
      if (hazard->indicator == HazardIndicator::false_activation) {
        probability = kpis.false_activation_rate;
      }
      const HazardRate rate = hazard_rate(*occ->second, probability);

      RiskResult r = base;
      r.hazard_id = hazard_id;
      r.severity = hazard_severity(kpis, *hazard, rules);
      r.risk_level = rate.rate_per_hour > 0.0 ? matrix.at(r.severity, r.occurrence_class)
                                              : RiskLevel::negligible;
      r.hazard_rate_per_hour = rate.rate_per_hour;
      r.hours_to_hazard = rate.hours_to_hazard;
      if (r.hours_to_hazard) {
        r.km_to_hazard = *r.hours_to_hazard * v_r * kMetersPerSecondToKmPerHour;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string risk_results_to_csv(std::span<const RiskResult> results)
{
  using detail::format_double;
  const auto opt = [](const std::optional<double> & v) {
    return v ? format_double(*v) : std::string("inf");
  };
  std::string out = "scenario,hazard,S,O_class,risk,rate_per_hour,hours_to_hazard,km_to_hazard\n";
  for (const auto & r : results) {
    out += detail::csv_escape(r.scenario_id) + "," + detail::csv_escape(r.hazard_id) + "," +
           std::string(to_string(r.severity)) + "," + std::string(to_string(r.occurrence_class)) +
           "," + std::string(to_string(r.risk_level)) + "," + format_double(r.hazard_rate_per_hour) +
           "," + opt(r.hours_to_hazard) + "," + opt(r.km_to_hazard) + "\n";
  }
  return out;
}

std::vector<OccurrenceSpec> parse_occurrences(std::string_view document)
{
  const auto doc = detail::parse_json_document(document, "occurrence");
  if (!doc.is_array()) {
    detail::schema_error("", "occurrence document must be an array");
  }
  std::vector<OccurrenceSpec> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    const auto & j = doc[i];
    if (!j.is_object()) {
      detail::schema_error(ptr, "entry must be an object");
    }
    detail::reject_unknown_keys(j, {"leaf_id", "exposure_rate", "source"}, ptr);
    OccurrenceSpec o;
    const auto id = j.find("leaf_id");
    if (id == j.end() || !id->is_string()) {
      detail::schema_error(ptr + "/leaf_id", "must be a string");
    }
    o.leaf_id = id->get<std::string>();
    o.exposure_rate = detail::require_number(j, "exposure_rate", ptr);
    o.source = j.value("source", std::string{});
    try {
      o.validate();
    } catch (const ParameterDomainError & e) {
      detail::schema_error(ptr, e.what());
    }
    if (!seen.insert(o.leaf_id).second) {
      detail::schema_error(ptr, "duplicate occurrence entry for '" + o.leaf_id + "'");
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<OccurrenceSpec> load_occurrences(const std::filesystem::path & path)
{
  return parse_occurrences(detail::read_text_file(path));
}

AcceptanceCriteria parse_criteria(std::string_view document)
{
  const auto doc = detail::parse_json_document(document, "criteria");
  if (!doc.is_object()) {
    detail::schema_error("", "criteria document must be an object");
  }
  detail::reject_unknown_keys(
    doc,
    {"max_final_gap_degradation", "max_collision_rate", "max_false_activation_rate",
     "min_ttc_at_trigger"},
    "");
  AcceptanceCriteria c;
  c.max_final_gap_degradation = detail::require_number(doc, "max_final_gap_degradation", "");
  c.max_collision_rate = detail::require_number(doc, "max_collision_rate", "");
  c.max_false_activation_rate = detail::require_number(doc, "max_false_activation_rate", "");
  c.min_ttc_at_trigger = detail::require_number(doc, "min_ttc_at_trigger", "");
  try {
    c.validate();
  } catch (const ParameterDomainError & e) {
    detail::schema_error("", e.what());
  }
  return c;
}

AcceptanceCriteria load_criteria(const std::filesystem::path & path)
{
  return parse_criteria(detail::read_text_file(path));
}

}  // namespace sotif
