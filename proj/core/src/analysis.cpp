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

#include "sotif/analysis.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace sotif
{

namespace
{

std::string percent(double fraction)
{
  std::ostringstream s;
  s.precision(3);
  s << fraction * 100.0 << "%";
  return s.str();
}

std::string join(const std::vector<std::string> & parts, std::string_view sep)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string rationale_for(const EffectModel & e, const KpiAggregate & kpis)
{
  std::vector<std::string> parts;
  if (e.perception_range_factor < 1.0) {
    parts.push_back("perception range reduced to " + percent(e.perception_range_factor));
  }
  if (e.ghost_rate > 0.0) {
    parts.push_back("ghost detections in " + percent(e.ghost_rate) + " of frames");
  }
  if (e.perception_algo) {
    parts.push_back("object extraction degraded");
  }
  if (e.rho_add > 0.0) {
    parts.push_back("response delayed by " + detail::format_double(e.rho_add) + " s");
  }
  if (e.mu_factor < 1.0) {
    parts.push_back("road friction reduced to " + percent(e.mu_factor));
  }
  std::string text = parts.empty() ? "no effect on the function" : join(parts, "; ");
  if (kpis.collision_rate > 0.0) {
    text += "; collision in " + percent(kpis.collision_rate) + " of runs (max impact " +
            detail::format_double(std::round(kpis.impact_speed_max * 100.0) / 100.0) + " m/s)";
  }
  if (kpis.false_activation_rate > 0.0) {
    text += "; false activation in " + percent(kpis.false_activation_rate) + " of runs";
  }
  return text;
}

}  // namespace

std::string_view to_string(Severity s)
{
  static constexpr std::string_view names[] = {"S0", "S1", "S2", "S3"};
  return names[static_cast<int>(s)];
}

std::string_view to_string(Controllability c)
{
  static constexpr std::string_view names[] = {"C0", "C1", "C2", "C3"};
  return names[static_cast<int>(c)];
}

std::string_view to_string(Subsystem s)
{
  switch (s) {
    case Subsystem::perception_sense:
      return "perception_sense";
    case Subsystem::perception_algo:
      return "perception_algo";
    case Subsystem::decision:
      return "decision";
    case Subsystem::actuation:
      return "actuation";
  }
  return "unknown";
}

std::optional<Severity> parse_severity(std::string_view s)
{
  for (auto v : {Severity::S0, Severity::S1, Severity::S2, Severity::S3}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Controllability> parse_controllability(std::string_view s)
{
  for (auto v : {Controllability::C0, Controllability::C1, Controllability::C2, Controllability::C3}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Subsystem> parse_subsystem(std::string_view s)
{
  for (auto v :
       {Subsystem::perception_sense, Subsystem::perception_algo, Subsystem::decision,
        Subsystem::actuation}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

HazardRegistry::HazardRegistry()
{
  hazards_.push_back(Hazard{
    std::string(kCollisionHazard),
    "a collision due to the inability to completely brake before reaching an obstacle",
    Severity::S3, HazardIndicator::collision});
  hazards_.push_back(Hazard{
    std::string(kFalseActivationHazard),
    "activation of the emergency brake due to a false object detection", Severity::S1,
    HazardIndicator::false_activation});
}

void HazardRegistry::add(Hazard hazard)
{
  if (hazard.id.empty() || contains(hazard.id)) {
    throw Error("hazard id '" + hazard.id + "' is empty or already registered");
  }
  hazards_.push_back(std::move(hazard));
}

const Hazard * HazardRegistry::find(std::string_view id) const
{
  const auto it =
    std::find_if(hazards_.begin(), hazards_.end(), [&](const Hazard & h) { return h.id == id; });
  return it == hazards_.end() ? nullptr : &*it;
}

void SeverityRules::validate() const
{
  if (
    !std::isfinite(s3_min_impact_speed) || !std::isfinite(s2_min_impact_speed) ||
    s2_min_impact_speed <= 0.0 || s3_min_impact_speed < s2_min_impact_speed) {
    throw ParameterDomainError("severity thresholds require 0 < s2_min_impact_speed <= s3_min_impact_speed");
  }
}

Severity SeverityRules::for_collision(double impact_speed_max) const
{
  if (impact_speed_max >= s3_min_impact_speed) return Severity::S3;
  if (impact_speed_max >= s2_min_impact_speed) return Severity::S2;
  if (impact_speed_max > 0.0) return Severity::S1;
  return Severity::S0;
}

SubsystemSet classify_affected_subsystems(const EffectModel & effects)
{
  SubsystemSet out;
  if (effects.perception_range_factor < 1.0 || effects.ghost_rate > 0.0) {
    out.insert(Subsystem::perception_sense);
  }
  if (effects.perception_algo) {
    out.insert(Subsystem::perception_algo);
  }
  if (effects.rho_add > 0.0) {
    out.insert(Subsystem::decision);
  }
  if (effects.mu_factor < 1.0) {
    out.insert(Subsystem::actuation);
  }
  return out;
}

std::vector<std::string> link_hazards(const KpiAggregate & kpis, const HazardRegistry & registry)
{
  std::vector<std::string> out;
  for (const auto & h : registry.hazards()) {
    const bool evidenced =
      (h.indicator == HazardIndicator::collision && kpis.collision_rate > 0.0) ||
      (h.indicator == HazardIndicator::false_activation && kpis.false_activation_rate > 0.0);
    if (evidenced) {
      out.push_back(h.id);
    }
  }
  return out;
}

Severity hazard_severity(
  const KpiAggregate & kpis, const Hazard & hazard, const SeverityRules & rules)
{
  switch (hazard.indicator) {
    case HazardIndicator::collision:
      return kpis.collision_rate > 0.0 ? rules.for_collision(kpis.impact_speed_max) : Severity::S0;
    case HazardIndicator::false_activation:
      return kpis.false_activation_rate > 0.0 ? rules.false_activation_severity : Severity::S0;
    case HazardIndicator::none:
      return hazard.default_severity;
  }
  return Severity::S0;
}

std::vector<AnalysisRow> build_analysis_sheet(
  std::span<const Scenario> scenarios, std::span<const KpiAggregate> sweeps,
  const HazardRegistry & registry, const SeverityRules & rules, Controllability controllability)
{
  rules.validate();
  std::map<std::string_view, const KpiAggregate *> by_id;
  for (const auto & s : sweeps) {
    by_id.emplace(s.scenario_id, &s);
  }

  std::vector<AnalysisRow> rows;
  for (const auto & scenario : scenarios) {
    if (scenario.is_nominal()) {
      continue;
    }
    const auto it = by_id.find(scenario.id);
    if (it == by_id.end()) {
      throw IncompleteAnalysisError("no sweep result for scenario '" + scenario.id + "'");
    }
    const KpiAggregate & kpis = *it->second;

    AnalysisRow row;
    row.scenario_id = scenario.id;
    row.leaf_id = scenario.condition->leaf_id;
    row.condition_name = scenario.condition->leaf_name;
    row.category_path = scenario.condition->category_names;
    row.affected_subsystems = classify_affected_subsystems(scenario.effects);
    row.controllability = controllability;
    row.linked_hazard_ids = link_hazards(kpis, registry);
    row.severity = Severity::S0;
    for (const auto & id : row.linked_hazard_ids) {
      row.severity = std::max(row.severity, hazard_severity(kpis, *registry.find(id), rules));
    }
    row.rationale = rationale_for(scenario.effects, kpis);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string analysis_sheet_to_csv(std::span<const AnalysisRow> rows)
{
  std::string out =
    "triggering_condition,category_path,affected_subsystems,severity,controllability,hazards,"
    "rationale\n";
  for (const auto & r : rows) {
    std::vector<std::string> subsystems;
    for (auto s : r.affected_subsystems) {
      subsystems.emplace_back(to_string(s));
    }
    out += detail::csv_escape(r.leaf_id) + "," + detail::csv_escape(join(r.category_path, " > ")) +
           "," + detail::csv_escape(join(subsystems, ";")) + "," + std::string(to_string(r.severity)) +
           "," + std::string(to_string(r.controllability)) + "," +
           detail::csv_escape(join(r.linked_hazard_ids, ";")) + "," +
           detail::csv_escape(r.rationale) + "\n";
  }
  return out;
}

}  // namespace sotif
