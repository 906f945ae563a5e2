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

#include "sotif/json_io.hpp"

#include "sotif/errors.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace sotif
{

using nlohmann::json;

namespace
{

json opt(const std::optional<double> & v) { return v ? json(*v) : json(nullptr); }

std::optional<double> get_opt(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<double>();
}

template <typename Enum, typename Parser>
Enum get_enum(const json & j, const char * key, Parser parse)
{
  const std::string token = j.at(key).get<std::string>();
  const auto v = parse(token);
  if (!v) {
    throw DocumentError(
      DocumentError::Kind::schema, std::string("invalid value '") + token + "' for '" + key + "'");
  }
  return *v;
}

}  // namespace

void to_json(json & j, const VehicleParams & v)
{
  j = json{{"v_r", v.v_r}, {"rho", v.rho}, {"a_max_accel", v.a_max_accel}, {"a_min_brake", v.a_min_brake}};
}

void from_json(const json & j, VehicleParams & v)
{
  j.at("v_r").get_to(v.v_r);
  j.at("rho").get_to(v.rho);
  j.at("a_max_accel").get_to(v.a_max_accel);
  j.at("a_min_brake").get_to(v.a_min_brake);
}

void to_json(json & j, const KinematicState & s)
{
  j = json{{"position", s.position}, {"velocity", s.velocity}, {"time", s.time}};
}

void from_json(const json & j, KinematicState & s)
{
  j.at("position").get_to(s.position);
  j.at("velocity").get_to(s.velocity);
  j.at("time").get_to(s.time);
}

void to_json(json & j, const TriggeringCondition & c)
{
  j = json{
    {"leaf_id", c.leaf_id},
    {"leaf_name", c.leaf_name},
    {"category_path", c.category_path},
    {"category_names", c.category_names},
    {"intensity", c.intensity ? json(to_string(*c.intensity)) : json(nullptr)},
    {"odd_tags", c.odd_tags}};
}

void from_json(const json & j, TriggeringCondition & c)
{
  j.at("leaf_id").get_to(c.leaf_id);
  j.at("leaf_name").get_to(c.leaf_name);
  j.at("category_path").get_to(c.category_path);
  j.at("category_names").get_to(c.category_names);
  c.intensity.reset();
  if (!j.at("intensity").is_null()) {
    c.intensity = get_enum<Intensity>(j, "intensity", parse_intensity);
  }
  j.at("odd_tags").get_to(c.odd_tags);
}

void to_json(json & j, const OddDefinition & o)
{
  j = json{
    {"id", o.id},       {"d_object", o.d_object}, {"d_perception", o.d_perception},
    {"mu", o.mu},       {"odd_tags", o.odd_tags}, {"vehicle", o.vehicle}};
}

void from_json(const json & j, OddDefinition & o)
{
  j.at("id").get_to(o.id);
  j.at("d_object").get_to(o.d_object);
  j.at("d_perception").get_to(o.d_perception);
  j.at("mu").get_to(o.mu);
  j.at("odd_tags").get_to(o.odd_tags);
  j.at("vehicle").get_to(o.vehicle);
}

void to_json(json & j, const EffectModel & e)
{
  j = json{
    {"perception_range_factor", e.perception_range_factor},
    {"ghost_rate", e.ghost_rate},
    {"mu_factor", e.mu_factor},
    {"rho_add", e.rho_add},
    {"perception_algo", e.perception_algo}};
}

void from_json(const json & j, EffectModel & e)
{
  j.at("perception_range_factor").get_to(e.perception_range_factor);
  j.at("ghost_rate").get_to(e.ghost_rate);
  j.at("mu_factor").get_to(e.mu_factor);
  j.at("rho_add").get_to(e.rho_add);
  j.at("perception_algo").get_to(e.perception_algo);
}

void to_json(json & j, const Scenario & s)
{
  j = json{
    {"id", s.id},
    {"odd", s.odd},
    {"condition", s.condition ? json(*s.condition) : json(nullptr)},
    {"effects", s.effects},
    {"seed", s.seed},
    {"mitigations", s.mitigations}};
}

void from_json(const json & j, Scenario & s)
{
  j.at("id").get_to(s.id);
  j.at("odd").get_to(s.odd);
  s.condition.reset();
  if (!j.at("condition").is_null()) {
    s.condition = j.at("condition").get<TriggeringCondition>();
  }
  j.at("effects").get_to(s.effects);
  j.at("seed").get_to(s.seed);
  j.at("mitigations").get_to(s.mitigations);
}

void to_json(json & j, const SimEvent & e)
{
  j = json{
    {"time", e.time},
    {"stage", to_string(e.stage)},
    {"kind", to_string(e.kind)},
    {"gap", e.gap},
    {"velocity", e.velocity}};
  if (e.perceived_gap) {
    j["perceived_gap"] = *e.perceived_gap;
  }
}

void from_json(const json & j, SimEvent & e)
{
  j.at("time").get_to(e.time);
  e.stage = get_enum<Stage>(j, "stage", parse_stage);
  e.kind = get_enum<EventKind>(j, "kind", parse_event_kind);
  j.at("gap").get_to(e.gap);
  j.at("velocity").get_to(e.velocity);
  e.perceived_gap = get_opt(j, "perceived_gap");
}

void to_json(json & j, const SimTrace & t)
{
  j = json{
    {"scenario_id", t.scenario_id},
    {"seed", t.seed},
    {"events", t.events},
    {"states", t.states},
    {"terminal", t.terminal ? json(to_string(*t.terminal)) : json(nullptr)}};
}

void from_json(const json & j, SimTrace & t)
{
  j.at("scenario_id").get_to(t.scenario_id);
  j.at("seed").get_to(t.seed);
  j.at("events").get_to(t.events);
  j.at("states").get_to(t.states);
  t.terminal.reset();
  if (!j.at("terminal").is_null()) {
    t.terminal = get_enum<Terminal>(j, "terminal", parse_terminal);
  }
}

void to_json(json & j, const KpiReport & k)
{
  j = json{
    {"ttc_at_trigger", opt(k.ttc_at_trigger)},
    {"final_gap", k.final_gap},
    {"collision", k.collision},
    {"impact_speed", k.impact_speed},
    {"false_activation", k.false_activation},
    {"brake_triggered", k.brake_triggered},
    {"d_rho_observed", k.d_rho_observed},
    {"d_act_observed", k.d_act_observed},
    {"terminal", to_string(k.terminal)}};
}

void from_json(const json & j, KpiReport & k)
{
  k.ttc_at_trigger = get_opt(j, "ttc_at_trigger");
  j.at("final_gap").get_to(k.final_gap);
  j.at("collision").get_to(k.collision);
  j.at("impact_speed").get_to(k.impact_speed);
  j.at("false_activation").get_to(k.false_activation);
  j.at("brake_triggered").get_to(k.brake_triggered);
  j.at("d_rho_observed").get_to(k.d_rho_observed);
  j.at("d_act_observed").get_to(k.d_act_observed);
  k.terminal = get_enum<Terminal>(j, "terminal", parse_terminal);
}

void to_json(json & j, const KpiAggregate & a)
{
  j = json{
    {"scenario_id", a.scenario_id},
    {"odd_id", a.odd_id},
    {"runs", a.runs},
    {"collision_rate", a.collision_rate},
    {"false_activation_rate", a.false_activation_rate},
    {"trigger_rate", a.trigger_rate},
    {"gap_mean", a.gap_mean},
    {"gap_min", a.gap_min},
    {"gap_max", a.gap_max},
    {"impact_speed_mean", a.impact_speed_mean},
    {"impact_speed_min", a.impact_speed_min},
    {"impact_speed_max", a.impact_speed_max},
    {"ttc_min", opt(a.ttc_min)},
    {"ttc_mean", opt(a.ttc_mean)}};
}

void from_json(const json & j, KpiAggregate & a)
{
  j.at("scenario_id").get_to(a.scenario_id);
  j.at("odd_id").get_to(a.odd_id);
  j.at("runs").get_to(a.runs);
  j.at("collision_rate").get_to(a.collision_rate);
  j.at("false_activation_rate").get_to(a.false_activation_rate);
  j.at("trigger_rate").get_to(a.trigger_rate);
  j.at("gap_mean").get_to(a.gap_mean);
  j.at("gap_min").get_to(a.gap_min);
  j.at("gap_max").get_to(a.gap_max);
  j.at("impact_speed_mean").get_to(a.impact_speed_mean);
  j.at("impact_speed_min").get_to(a.impact_speed_min);
  j.at("impact_speed_max").get_to(a.impact_speed_max);
  a.ttc_min = get_opt(j, "ttc_min");
  a.ttc_mean = get_opt(j, "ttc_mean");
}

void to_json(json & j, const AnalysisRow & r)
{
  json subsystems = json::array();
  for (auto s : r.affected_subsystems) {
    subsystems.push_back(to_string(s));
  }
  j = json{
    {"scenario_id", r.scenario_id},
    {"triggering_condition", r.leaf_id},
    {"condition_name", r.condition_name},
    {"category_path", r.category_path},
    {"affected_subsystems", subsystems},
    {"severity", to_string(r.severity)},
    {"controllability", to_string(r.controllability)},
    {"hazards", r.linked_hazard_ids},
    {"rationale", r.rationale}};
}

void from_json(const json & j, AnalysisRow & r)
{
  j.at("scenario_id").get_to(r.scenario_id);
  j.at("triggering_condition").get_to(r.leaf_id);
  j.at("condition_name").get_to(r.condition_name);
  j.at("category_path").get_to(r.category_path);
  r.affected_subsystems.clear();
  for (const auto & s : j.at("affected_subsystems")) {
    const auto parsed = parse_subsystem(s.get<std::string>());
    if (!parsed) {
      throw DocumentError(DocumentError::Kind::schema, "invalid subsystem " + s.dump());
    }
    r.affected_subsystems.insert(*parsed);
  }
  r.severity = get_enum<Severity>(j, "severity", parse_severity);
  r.controllability = get_enum<Controllability>(j, "controllability", parse_controllability);
  j.at("hazards").get_to(r.linked_hazard_ids);
  j.at("rationale").get_to(r.rationale);
}

void to_json(json & j, const RiskResult & r)
{
  j = json{
    {"scenario_id", r.scenario_id},
    {"leaf_id", r.leaf_id},
    {"hazard_id", r.hazard_id},
    {"severity", to_string(r.severity)},
    {"occurrence_class", to_string(r.occurrence_class)},
    {"risk_level", to_string(r.risk_level)},
    {"hazard_rate_per_hour", r.hazard_rate_per_hour},
    {"hours_to_hazard", opt(r.hours_to_hazard)},
    {"km_to_hazard", opt(r.km_to_hazard)}};
}

void from_json(const json & j, RiskResult & r)
{
  j.at("scenario_id").get_to(r.scenario_id);
  j.at("leaf_id").get_to(r.leaf_id);
  j.at("hazard_id").get_to(r.hazard_id);
  r.severity = get_enum<Severity>(j, "severity", parse_severity);
  r.occurrence_class = get_enum<OccurrenceClass>(j, "occurrence_class", parse_occurrence_class);
  r.risk_level = get_enum<RiskLevel>(j, "risk_level", parse_risk_level);
  j.at("hazard_rate_per_hour").get_to(r.hazard_rate_per_hour);
  r.hours_to_hazard = get_opt(j, "hours_to_hazard");
  r.km_to_hazard = get_opt(j, "km_to_hazard");
}

void to_json(json & j, const AcceptanceCriteria & c)
{
  j = json{
    {"max_final_gap_degradation", c.max_final_gap_degradation},
    {"max_collision_rate", c.max_collision_rate},
    {"max_false_activation_rate", c.max_false_activation_rate},
    {"min_ttc_at_trigger", c.min_ttc_at_trigger}};
}

void from_json(const json & j, AcceptanceCriteria & c)
{
  j.at("max_final_gap_degradation").get_to(c.max_final_gap_degradation);
  j.at("max_collision_rate").get_to(c.max_collision_rate);
  j.at("max_false_activation_rate").get_to(c.max_false_activation_rate);
  j.at("min_ttc_at_trigger").get_to(c.min_ttc_at_trigger);
}

void to_json(json & j, const ClauseViolation & v)
{
  // measured may be +inf (total gap loss against a colliding nominal)
  const auto measured =
    std::isfinite(v.measured) ? std::optional<double>(v.measured) : std::optional<double>();
  j = json{{"clause", v.clause}, {"measured", opt(measured)}, {"threshold", v.threshold}};
}

void from_json(const json & j, ClauseViolation & v)
{
  j.at("clause").get_to(v.clause);
  v.measured = get_opt(j, "measured").value_or(std::numeric_limits<double>::infinity());
  j.at("threshold").get_to(v.threshold);
}

void to_json(json & j, const AcceptanceVerdict & v)
{
  j = json{
    {"scenario_id", v.scenario_id},
    {"pass", v.pass},
    {"violations", v.violations},
    {"hazards", v.hazard_ids}};
}

void from_json(const json & j, AcceptanceVerdict & v)
{
  j.at("scenario_id").get_to(v.scenario_id);
  j.at("pass").get_to(v.pass);
  j.at("violations").get_to(v.violations);
  j.at("hazards").get_to(v.hazard_ids);
}

void to_json(json & j, const RunMetadata & m)
{
  j = json{
    {"tool_version", m.tool_version},
    {"timestamp", m.timestamp},
    {"base_seed", m.base_seed},
    {"runs_per_scenario", m.runs_per_scenario},
    {"dt", m.dt},
    {"perception_tick", m.perception_tick},
    {"max_time", m.max_time},
    {"input_digests", m.input_digests}};
}

void from_json(const json & j, RunMetadata & m)
{
  j.at("tool_version").get_to(m.tool_version);
  j.at("timestamp").get_to(m.timestamp);
  j.at("base_seed").get_to(m.base_seed);
  j.at("runs_per_scenario").get_to(m.runs_per_scenario);
  j.at("dt").get_to(m.dt);
  j.at("perception_tick").get_to(m.perception_tick);
  j.at("max_time").get_to(m.max_time);
  j.at("input_digests").get_to(m.input_digests);
}

void to_json(json & j, const TaxonomySummary & t)
{
  j = json{
    {"total_leaves", t.total_leaves},
    {"relevant_leaves", t.relevant_leaves},
    {"leaves_per_root", t.leaves_per_root},
    {"excluded_leaf_ids", t.excluded_leaf_ids}};
}

void from_json(const json & j, TaxonomySummary & t)
{
  j.at("total_leaves").get_to(t.total_leaves);
  j.at("relevant_leaves").get_to(t.relevant_leaves);
  j.at("leaves_per_root").get_to(t.leaves_per_root);
  j.at("excluded_leaf_ids").get_to(t.excluded_leaf_ids);
}

void to_json(json & j, const MitigationComparison & m)
{
  j = json{
    {"mitigation_id", m.mitigation_id},
    {"before_id", m.before_id},
    {"after_id", m.after_id},
    {"before", m.before},
    {"after", m.after}};
}

void from_json(const json & j, MitigationComparison & m)
{
  j.at("mitigation_id").get_to(m.mitigation_id);
  j.at("before_id").get_to(m.before_id);
  j.at("after_id").get_to(m.after_id);
  j.at("before").get_to(m.before);
  j.at("after").get_to(m.after);
}

void to_json(json & j, const ReportBundle & b)
{
  j = json{
    {"metadata", b.metadata},
    {"taxonomy", b.taxonomy},
    {"odd", b.odd},
    {"odd_violations", b.odd_violations},
    {"criteria", b.criteria},
    {"scenarios", b.scenarios},
    {"kpis", b.kpis},
    {"analysis", b.analysis},
    {"mitigations", b.mitigations},
    {"residual_analysis", b.residual_analysis},
    {"risks", b.risks},
    {"verdicts", b.verdicts}};
}

void from_json(const json & j, ReportBundle & b)
{
  j.at("metadata").get_to(b.metadata);
  j.at("taxonomy").get_to(b.taxonomy);
  j.at("odd").get_to(b.odd);
  j.at("odd_violations").get_to(b.odd_violations);
  j.at("criteria").get_to(b.criteria);
  j.at("scenarios").get_to(b.scenarios);
  j.at("kpis").get_to(b.kpis);
  j.at("analysis").get_to(b.analysis);
  j.at("mitigations").get_to(b.mitigations);
  j.at("residual_analysis").get_to(b.residual_analysis);
  j.at("risks").get_to(b.risks);
  j.at("verdicts").get_to(b.verdicts);
}

}  // namespace sotif
