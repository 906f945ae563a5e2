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

#include "sotif/scenario.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace sotif
{

using nlohmann::json;

namespace
{

void require(bool condition, const std::string & what)
{
  if (!condition) {
    throw ParameterDomainError(what);
  }
}

bool in_unit_interval_open_low(double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; }

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

std::uint64_t fnv1a(std::string_view key)
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string fmt_num(double x) { return detail::format_double(x); }

// --- input documents ---------------------------------------------------------

std::optional<double> optional_number(const json & j, const char * key, const std::string & ptr)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    return std::nullopt;
  }
  if (!it->is_number()) {
    detail::schema_error(ptr + "/" + key, "must be a number");
  }
  return it->get<double>();
}

PartialEffect read_partial_effect(const json & j, const std::string & ptr)
{
  if (!j.is_object()) {
    detail::schema_error(ptr, "effect entry must be an object");
  }
  detail::reject_unknown_keys(
    j, {"perception_range_factor", "ghost_rate", "mu_factor", "rho_add", "perception_algo"}, ptr);
  PartialEffect p;
  p.perception_range_factor = optional_number(j, "perception_range_factor", ptr);
  p.ghost_rate = optional_number(j, "ghost_rate", ptr);
  p.mu_factor = optional_number(j, "mu_factor", ptr);
  p.rho_add = optional_number(j, "rho_add", ptr);
  if (const auto it = j.find("perception_algo"); it != j.end()) {
    if (!it->is_boolean()) {
      detail::schema_error(ptr + "/perception_algo", "must be a boolean");
    }
    p.perception_algo = it->get<bool>();
  }
  try {
    p.over(EffectModel::neutral()).validate();
  } catch (const ParameterDomainError & e) {
    detail::schema_error(ptr, e.what());
  }
  return p;
}

PartialVehicleParams read_partial_vehicle(const json & j, const std::string & ptr)
{
  if (!j.is_object()) {
    detail::schema_error(ptr, "vehicle overrides must be an object");
  }
  detail::reject_unknown_keys(j, {"v_r", "rho", "a_max_accel", "a_min_brake"}, ptr);
  PartialVehicleParams p;
  p.v_r = optional_number(j, "v_r", ptr);
  p.rho = optional_number(j, "rho", ptr);
  p.a_max_accel = optional_number(j, "a_max_accel", ptr);
  p.a_min_brake = optional_number(j, "a_min_brake", ptr);
  return p;
}

std::map<std::string, PartialEffect> read_effect_table(const json & doc, const char * key)
{
  std::map<std::string, PartialEffect> out;
  const auto it = doc.find(key);
  if (it == doc.end()) {
    return out;
  }
  const std::string ptr = std::string("/") + key;
  if (!it->is_object()) {
    detail::schema_error(ptr, "must be an object keyed by id");
  }
  for (const auto & item : it->items()) {
    out.emplace(item.key(), read_partial_effect(item.value(), ptr + "/" + item.key()));
  }
  return out;
}

TagSet read_tags(const json & j, const std::string & ptr)
{
  TagSet tags;
  if (!j.is_array()) {
    detail::schema_error(ptr, "must be an array of strings");
  }
  for (const auto & t : j) {
    if (!t.is_string()) {
      detail::schema_error(ptr, "must be an array of strings");
    }
    tags.insert(t.get<std::string>());
  }
  return tags;
}

}  // namespace

// --- value types -------------------------------------------------------------

void OddDefinition::validate() const
{
  require(std::isfinite(d_object) && d_object > 0.0, "d_object must be finite and > 0");
  require(std::isfinite(d_perception) && d_perception > 0.0, "d_perception must be finite and > 0");
  require(in_unit_interval_open_low(mu), "mu must lie in (0, 1]");
  vehicle.validate();
}

std::vector<std::string> OddDefinition::nominal_violations() const
{
  std::vector<std::string> out;
  if (!(d_perception > d_object)) {
    out.push_back(
      "d_perception (" + fmt_num(d_perception) + " m) is not longer than d_object (" +
      fmt_num(d_object) + " m)");
  }
  const double d_rss = rss_min_distance(vehicle);
  if (!(d_perception > d_rss)) {
    out.push_back(
      "d_perception (" + fmt_num(d_perception) + " m) is not longer than the RSS distance (" +
      fmt_num(d_rss) + " m)");
  }
  return out;
}

void EffectModel::validate() const
{
  require(
    in_unit_interval_open_low(perception_range_factor), "perception_range_factor must lie in (0, 1]");
  require(
    std::isfinite(ghost_rate) && ghost_rate >= 0.0 && ghost_rate <= 1.0,
    "ghost_rate must lie in [0, 1]");
  require(in_unit_interval_open_low(mu_factor), "mu_factor must lie in (0, 1]");
  require(std::isfinite(rho_add) && rho_add >= 0.0, "rho_add must be finite and >= 0");
}

EffectModel PartialEffect::over(const EffectModel & base) const
{
  EffectModel e = base;
  if (perception_range_factor) e.perception_range_factor = *perception_range_factor;
  if (ghost_rate) e.ghost_rate = *ghost_rate;
  if (mu_factor) e.mu_factor = *mu_factor;
  if (rho_add) e.rho_add = *rho_add;
  if (perception_algo) e.perception_algo = *perception_algo;
  return e;
}

bool PartialEffect::empty() const { return *this == PartialEffect{}; }

void MitigationSpec::validate() const
{
  if (id.empty()) {
    throw InvalidMitigationError("mitigation id must not be empty");
  }
  try {
    effect_overrides.over(EffectModel::neutral()).validate();
    auto finite_nonneg = [&](const std::optional<double> & v, const char * name, bool strict) {
      if (v && !(std::isfinite(*v) && (strict ? *v > 0.0 : *v >= 0.0))) {
        throw ParameterDomainError(std::string(name) + " override out of range");
      }
    };
    finite_nonneg(vehicle_overrides.v_r, "v_r", false);
    finite_nonneg(vehicle_overrides.rho, "rho", false);
    finite_nonneg(vehicle_overrides.a_max_accel, "a_max_accel", false);
    finite_nonneg(vehicle_overrides.a_min_brake, "a_min_brake", true);
  } catch (const ParameterDomainError & e) {
    throw InvalidMitigationError("mitigation '" + id + "': " + e.what());
  }
}

// --- operations --------------------------------------------------------------

EffectModel resolve_effects(const TriggeringCondition & condition, const EffectMapping & mapping)
{
  if (const auto it = mapping.by_leaf.find(condition.leaf_id); it != mapping.by_leaf.end()) {
    return it->second.over(EffectModel::neutral());
  }
  for (auto cat = condition.category_path.rbegin(); cat != condition.category_path.rend(); ++cat) {
    if (const auto it = mapping.by_category.find(*cat); it != mapping.by_category.end()) {
      return it->second.over(EffectModel::neutral());
    }
  }
  if (mapping.defaults) {
    return mapping.defaults->over(EffectModel::neutral());
  }
  throw UnmappedConditionError(condition.leaf_id);
}

std::vector<Scenario> generate_scenarios(
  const OddDefinition & odd, std::span<const TriggeringCondition> conditions,
  const EffectMapping & mapping, std::uint64_t base_seed)
{
  odd.validate();
  std::vector<Scenario> out;
  out.reserve(conditions.size() + 1);

  Scenario nominal;
  nominal.id = std::string(kNominalScenarioId);
  nominal.odd = odd;
  nominal.seed = derive_seed(base_seed, nominal.id);
  out.push_back(std::move(nominal));

  std::set<std::string> ids{std::string(kNominalScenarioId)};
  for (const auto & condition : conditions) {
    Scenario s;
    s.id = condition.leaf_id;
    if (!ids.insert(s.id).second) {
      throw Error("scenario id '" + s.id + "' is not unique");
    }
    s.odd = odd;
    s.condition = condition;
    s.effects = resolve_effects(condition, mapping);
    s.effects.validate();
    s.seed = derive_seed(base_seed, s.id);
    out.push_back(std::move(s));
  }
  return out;
}

Scenario apply_mitigation(const Scenario & scenario, const MitigationSpec & m)
{
  m.validate();
  const EffectModel & cur = scenario.effects;
  const PartialEffect & o = m.effect_overrides;
  std::vector<std::string> worse;
  if (o.perception_range_factor && *o.perception_range_factor < cur.perception_range_factor) {
    worse.emplace_back("perception_range_factor");
  }
  if (o.ghost_rate && *o.ghost_rate > cur.ghost_rate) worse.emplace_back("ghost_rate");
  if (o.mu_factor && *o.mu_factor < cur.mu_factor) worse.emplace_back("mu_factor");
  if (o.rho_add && *o.rho_add > cur.rho_add) worse.emplace_back("rho_add");
  if (o.perception_algo && *o.perception_algo && !cur.perception_algo) {
    worse.emplace_back("perception_algo");
  }

  const VehicleParams & v = scenario.odd.vehicle;
  const PartialVehicleParams & vo = m.vehicle_overrides;
  if (vo.v_r && *vo.v_r > v.v_r) worse.emplace_back("v_r");
  if (vo.rho && *vo.rho > v.rho) worse.emplace_back("rho");
  if (vo.a_max_accel && *vo.a_max_accel < v.a_max_accel) worse.emplace_back("a_max_accel");
  if (vo.a_min_brake && *vo.a_min_brake < v.a_min_brake) worse.emplace_back("a_min_brake");

  if (!worse.empty()) {
    std::ostringstream msg;
    msg << "mitigation '" << m.id << "' worsens scenario '" << scenario.id << "' in:";
    for (const auto & f : worse) {
      msg << ' ' << f;
    }
    throw InvalidMitigationError(msg.str());
  }

  Scenario out = scenario;
  out.id = scenario.id + "+" + m.id;
  out.effects = o.over(cur);
  if (vo.v_r) out.odd.vehicle.v_r = *vo.v_r;
  if (vo.rho) out.odd.vehicle.rho = *vo.rho;
  if (vo.a_max_accel) out.odd.vehicle.a_max_accel = *vo.a_max_accel;
  if (vo.a_min_brake) out.odd.vehicle.a_min_brake = *vo.a_min_brake;
  out.mitigations.push_back(m.id);
  return out;
}

EffectiveParams effective_parameters(const Scenario & scenario)
{
  scenario.odd.validate();
  scenario.effects.validate();
  EffectiveParams p;
  p.vehicle = scenario.odd.vehicle;
  p.vehicle.rho += scenario.effects.rho_add;
  p.perception_range = scenario.odd.d_perception * scenario.effects.perception_range_factor;
  p.ghost_rate = scenario.effects.ghost_rate;
  p.friction = scenario.odd.mu * scenario.effects.mu_factor;
  p.brake_decel = effective_brake_decel(p.vehicle, p.friction);
  p.trigger_distance = rss_min_distance(p.vehicle);
  return p;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key)
{
  return splitmix64(splitmix64(base) ^ fnv1a(key));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
  return splitmix64(splitmix64(base) ^ splitmix64(index ^ 0x5851F42D4C957F2DULL));
}

// --- documents ---------------------------------------------------------------

OddDefinition parse_odd(std::string_view document)
{
  const json doc = detail::parse_json_document(document, "ODD");
  if (!doc.is_object()) {
    detail::schema_error("", "ODD document must be an object");
  }
  detail::reject_unknown_keys(
    doc, {"id", "d_object", "d_perception", "mu", "odd_tags", "vehicle"}, "");
  OddDefinition odd;
  const auto id = doc.find("id");
  if (id == doc.end() || !id->is_string() || id->get<std::string>().empty()) {
    detail::schema_error("/id", "must be a non-empty string");
  }
  odd.id = id->get<std::string>();
  odd.d_object = detail::require_number(doc, "d_object", "");
  odd.d_perception = detail::require_number(doc, "d_perception", "");
  odd.mu = doc.contains("mu") ? detail::require_number(doc, "mu", "") : 1.0;
  const auto tags = doc.find("odd_tags");
  if (tags == doc.end()) {
    detail::schema_error("/odd_tags", "is required");
  }
  odd.odd_tags = read_tags(*tags, "/odd_tags");
  const auto veh = doc.find("vehicle");
  if (veh == doc.end() || !veh->is_object()) {
    detail::schema_error("/vehicle", "must be an object");
  }
  detail::reject_unknown_keys(*veh, {"v_r", "rho", "a_max_accel", "a_min_brake"}, "/vehicle");
  odd.vehicle.v_r = detail::require_number(*veh, "v_r", "/vehicle");
  odd.vehicle.rho = detail::require_number(*veh, "rho", "/vehicle");
  odd.vehicle.a_max_accel = detail::require_number(*veh, "a_max_accel", "/vehicle");
  odd.vehicle.a_min_brake = detail::require_number(*veh, "a_min_brake", "/vehicle");
  try {
    odd.validate();
  } catch (const ParameterDomainError & e) {
    detail::schema_error("", e.what());
  }
  return odd;
}

OddDefinition load_odd(const std::filesystem::path & path)
{
  return parse_odd(detail::read_text_file(path));
}

EffectMapping parse_effect_mapping(std::string_view document)
{
  const json doc = detail::parse_json_document(document, "effect mapping");
  if (!doc.is_object()) {
    detail::schema_error("", "effect mapping must be an object");
  }
  detail::reject_unknown_keys(doc, {"defaults", "by_leaf", "by_category"}, "");
  EffectMapping m;
  if (const auto it = doc.find("defaults"); it != doc.end()) {
    m.defaults = read_partial_effect(*it, "/defaults");
  }
  m.by_leaf = read_effect_table(doc, "by_leaf");
  m.by_category = read_effect_table(doc, "by_category");
  return m;
}

EffectMapping load_effect_mapping(const std::filesystem::path & path)
{
  return parse_effect_mapping(detail::read_text_file(path));
}

std::vector<MitigationSpec> parse_mitigations(std::string_view document)
{
  const json doc = detail::parse_json_document(document, "mitigations");
  if (!doc.is_array()) {
    detail::schema_error("", "mitigations document must be an array");
  }
  std::vector<MitigationSpec> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    const json & j = doc[i];
    if (!j.is_object()) {
      detail::schema_error(ptr, "mitigation must be an object");
    }
    detail::reject_unknown_keys(
      j, {"id", "description", "applies_to", "effect_overrides", "vehicle_overrides"}, ptr);
    MitigationSpec m;
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
      detail::schema_error(ptr + "/id", "must be a non-empty string");
    }
    m.id = id->get<std::string>();
    if (!ids.insert(m.id).second) {
      detail::schema_error(ptr + "/id", "duplicate mitigation id '" + m.id + "'");
    }
    m.description = j.value("description", std::string{});
    if (const auto at = j.find("applies_to"); at != j.end()) {
      read_tags(*at, ptr + "/applies_to");  // type check only; order matters below
      for (const auto & t : *at) {
        m.applies_to.push_back(t.get<std::string>());
      }
    }
    if (const auto eo = j.find("effect_overrides"); eo != j.end()) {
      m.effect_overrides = read_partial_effect(*eo, ptr + "/effect_overrides");
    }
    if (const auto vo = j.find("vehicle_overrides"); vo != j.end()) {
      m.vehicle_overrides = read_partial_vehicle(*vo, ptr + "/vehicle_overrides");
    }
    try {
      m.validate();
    } catch (const InvalidMitigationError & e) {
      detail::schema_error(ptr, e.what());
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MitigationSpec> load_mitigations(const std::filesystem::path & path)
{
  return parse_mitigations(detail::read_text_file(path));
}

}  // namespace sotif
