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

#include "sotif/report.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"
#include "sotif/json_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace sotif
{

using nlohmann::json;

StageError::StageError(std::string stage, const std::string & what)
: Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage))
{
}

// ---------------------------------------------------------------------------
// analysis config

namespace
{

template <typename Enum, typename Parser>
Enum require_enum(const json & value, Parser parse, const std::string & pointer)
{
  if (!value.is_string()) {
    detail::schema_error(pointer, "expected a string");
  }
  const auto parsed = parse(value.get<std::string>());
  if (!parsed) {
    detail::schema_error(pointer, "unknown value '" + value.get<std::string>() + "'");
  }
  return *parsed;
}

}  // namespace

AnalysisConfig parse_analysis_config(std::string_view document)
{
  const auto doc = detail::parse_json_document(document, "analysis config");
  if (!doc.is_object()) {
    detail::schema_error("", "analysis config must be an object");
  }
  detail::reject_unknown_keys(
    doc, {"severity_rules", "controllability", "occurrence_bins", "risk_matrix"}, "");

  AnalysisConfig cfg;
  if (const auto it = doc.find("severity_rules"); it != doc.end()) {
    const std::string ptr = "/severity_rules";
    if (!it->is_object()) detail::schema_error(ptr, "expected an object");
    detail::reject_unknown_keys(
      *it, {"s3_min_impact_speed", "s2_min_impact_speed", "false_activation_severity"}, ptr);
    if (it->contains("s3_min_impact_speed")) {
      cfg.severity_rules.s3_min_impact_speed = detail::require_number(*it, "s3_min_impact_speed", ptr);
    }
    if (it->contains("s2_min_impact_speed")) {
      cfg.severity_rules.s2_min_impact_speed = detail::require_number(*it, "s2_min_impact_speed", ptr);
    }
    if (it->contains("false_activation_severity")) {
      cfg.severity_rules.false_activation_severity = require_enum<Severity>(
        it->at("false_activation_severity"), parse_severity, ptr + "/false_activation_severity");
    }
  }
  if (const auto it = doc.find("controllability"); it != doc.end()) {
    cfg.controllability = require_enum<Controllability>(*it, parse_controllability, "/controllability");
  }
  if (const auto it = doc.find("occurrence_bins"); it != doc.end()) {
    const std::string ptr = "/occurrence_bins";
    if (!it->is_object()) detail::schema_error(ptr, "expected an object");
    detail::reject_unknown_keys(*it, {"o4_min", "o3_min", "o2_min"}, ptr);
    if (it->contains("o4_min")) cfg.occurrence_bins.o4_min = detail::require_number(*it, "o4_min", ptr);
    if (it->contains("o3_min")) cfg.occurrence_bins.o3_min = detail::require_number(*it, "o3_min", ptr);
    if (it->contains("o2_min")) cfg.occurrence_bins.o2_min = detail::require_number(*it, "o2_min", ptr);
  }
  if (const auto it = doc.find("risk_matrix"); it != doc.end()) {
    const std::string ptr = "/risk_matrix";
    if (!it->is_array() || it->size() != 4) {
      detail::schema_error(ptr, "expected 4 rows (S0..S3)");
    }
    RiskMatrix::Table table{};
    for (std::size_t s = 0; s < 4; ++s) {
      const auto & row = (*it)[s];
      const std::string row_ptr = ptr + "/" + std::to_string(s);
      if (!row.is_array() || row.size() != 4) {
        detail::schema_error(row_ptr, "expected 4 columns (O1..O4)");
      }
      for (std::size_t o = 0; o < 4; ++o) {
        table[s][o] =
          require_enum<RiskLevel>(row[o], parse_risk_level, row_ptr + "/" + std::to_string(o));
      }
    }
    if (!RiskMatrix::is_monotone(table)) {
      detail::schema_error(ptr, "risk matrix must be nondecreasing in severity and occurrence");
    }
    cfg.risk_matrix = RiskMatrix(table);
  }
  try {
    cfg.severity_rules.validate();
    cfg.occurrence_bins.validate();
  } catch (const ParameterDomainError & e) {
    detail::schema_error("", e.what());
  }
  return cfg;
}

AnalysisConfig load_analysis_config(const std::filesystem::path & path)
{
  return parse_analysis_config(detail::read_text_file(path));
}

// ---------------------------------------------------------------------------
// bundle

bool ReportBundle::all_passed() const
{
  return std::all_of(
    verdicts.begin(), verdicts.end(), [](const AcceptanceVerdict & v) { return v.pass; });
}

std::vector<std::string> ReportBundle::dangling_references() const
{
  std::set<std::string> known;
  for (const auto & s : scenarios) known.insert(s.id);
  std::set<std::string> missing;
  const auto check = [&](const std::string & id) {
    if (!known.contains(id)) missing.insert(id);
  };
  for (const auto & k : kpis) check(k.scenario_id);
  for (const auto & r : analysis) check(r.scenario_id);
  for (const auto & r : residual_analysis) check(r.scenario_id);
  for (const auto & m : mitigations) {
    check(m.before_id);
    check(m.after_id);
    check(m.before.scenario_id);
    check(m.after.scenario_id);
  }
  for (const auto & r : risks) check(r.scenario_id);
  for (const auto & v : verdicts) check(v.scenario_id);
  return {missing.begin(), missing.end()};
}

std::string bundle_to_json(const ReportBundle & bundle)
{
  return json(bundle).dump(2) + "\n";
}

ReportBundle bundle_from_json(std::string_view document)
{
  const auto doc = detail::parse_json_document(document, "bundle");
  try {
    return doc.get<ReportBundle>();
  } catch (const json::exception & e) {
    throw DocumentError(DocumentError::Kind::schema, std::string("bundle: ") + e.what());
  }
}

ReportBundle read_bundle(const std::filesystem::path & dir)
{
  return bundle_from_json(detail::read_text_file(dir / "bundle.json"));
}

// ---------------------------------------------------------------------------
// pipeline

namespace
{

template <typename Fn>
auto run_stage(const char * stage, Fn && fn) -> decltype(fn())
{
  try {
    return fn();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception & e) {
    throw StageError(stage, e.what());
  }
}

const KpiAggregate & kpis_of(const std::vector<KpiAggregate> & kpis, std::string_view id)
{
  const auto it = std::find_if(
    kpis.begin(), kpis.end(), [&](const KpiAggregate & k) { return k.scenario_id == id; });
  if (it == kpis.end()) {
    throw IncompleteAnalysisError("no KPIs for scenario '" + std::string(id) + "'");
  }
  return *it;
}

}  // namespace

PipelineResult run_pipeline(const PipelineInputs & inputs, const PipelineOptions & options)
{
  PipelineResult result;
  ReportBundle & b = result.bundle;
  b.metadata.timestamp = options.timestamp;
  b.metadata.base_seed = options.seed;
  b.metadata.runs_per_scenario = options.runs;
  b.metadata.dt = options.sim.dt;
  b.metadata.perception_tick = options.sim.perception_tick;
  b.metadata.max_time = options.sim.max_time;
  b.metadata.input_digests = inputs.input_digests;
  b.odd = inputs.odd;
  b.criteria = inputs.criteria;

  const auto relevant = run_stage("filter", [&] {
    validate_taxonomy(inputs.taxonomy);
    inputs.odd.validate();
    inputs.criteria.validate();
    options.sim.validate();
    if (options.runs == 0) {
      throw ParameterDomainError("runs per scenario must be positive");
    }
    const auto all = enumerate_leaves(inputs.taxonomy);
    auto kept = filter_by_odd(all, inputs.odd.odd_tags);
    std::set<std::string> kept_ids;
    for (const auto & c : kept) kept_ids.insert(c.leaf_id);
    b.taxonomy.total_leaves = all.size();
    b.taxonomy.relevant_leaves = kept.size();
    for (const auto & root : inputs.taxonomy.roots) b.taxonomy.leaves_per_root[root.id] = 0;
    for (const auto & c : all) {
      if (!kept_ids.contains(c.leaf_id)) {
        b.taxonomy.excluded_leaf_ids.push_back(c.leaf_id);
      } else if (!c.category_path.empty()) {
        ++b.taxonomy.leaves_per_root[c.category_path.front()];
      }
    }
    b.odd_violations = inputs.odd.nominal_violations();
    return kept;
  });

  b.scenarios = run_stage("generate", [&] {
    return generate_scenarios(inputs.odd, relevant, inputs.mapping, options.seed);
  });

  b.kpis = run_stage("sweep", [&] {
    return monte_carlo_sweep(b.scenarios, options.sim, options.runs, options.workers);
  });

  const AnalysisConfig & cfg = inputs.config;
  b.analysis = run_stage("analyze", [&] {
    return build_analysis_sheet(
      b.scenarios, b.kpis, inputs.registry, cfg.severity_rules, cfg.controllability);
  });

  // Final scenario of every condition after its mitigation chain.
  std::vector<Scenario> finals;
  run_stage("mitigate", [&] {
    std::set<std::string> leaf_ids;
    for (const auto & c : enumerate_leaves(inputs.taxonomy)) leaf_ids.insert(c.leaf_id);
    std::set<std::string> mitigation_ids;
    for (const auto & m : inputs.mitigations) {
      m.validate();
      if (!mitigation_ids.insert(m.id).second) {
        throw InvalidMitigationError("duplicate mitigation id '" + m.id + "'");
      }
      for (const auto & target : m.applies_to) {
        if (!leaf_ids.contains(target)) {
          throw InvalidMitigationError(
            "mitigation '" + m.id + "' targets unknown condition '" + target + "'");
        }
      }
    }

    std::vector<Scenario> added;
    std::vector<std::pair<std::string, std::string>> steps;  // (before id, mitigation id)
    for (const auto & s : b.scenarios) {
      if (s.is_nominal()) continue;
      Scenario current = s;
      for (const auto & m : inputs.mitigations) {
        if (std::find(m.applies_to.begin(), m.applies_to.end(), s.condition->leaf_id) ==
            m.applies_to.end()) {
          continue;
        }
        Scenario next = apply_mitigation(current, m);
        steps.emplace_back(current.id, m.id);
        added.push_back(next);
        current = std::move(next);
      }
      finals.push_back(std::move(current));
    }
    if (added.empty()) return;

    const auto added_kpis = monte_carlo_sweep(added, options.sim, options.runs, options.workers);
    b.scenarios.insert(b.scenarios.end(), added.begin(), added.end());
    b.kpis.insert(b.kpis.end(), added_kpis.begin(), added_kpis.end());
    for (std::size_t i = 0; i < added.size(); ++i) {
      MitigationComparison c;
      c.mitigation_id = steps[i].second;
      c.before_id = steps[i].first;
      c.after_id = added[i].id;
      c.before = kpis_of(b.kpis, c.before_id);
      c.after = added_kpis[i];
      b.mitigations.push_back(std::move(c));
    }
  });

  run_stage("risk", [&] {
    b.residual_analysis = b.mitigations.empty()
                            ? b.analysis
                            : build_analysis_sheet(
                                finals, b.kpis, inputs.registry, cfg.severity_rules,
                                cfg.controllability);
    b.risks = evaluate_residual_risk(
      b.residual_analysis, b.kpis, inputs.occurrences, b.scenarios, inputs.registry,
      cfg.severity_rules, cfg.occurrence_bins, cfg.risk_matrix);
  });

  run_stage("acceptance", [&] {
    const auto nominal_it = std::find_if(
      b.scenarios.begin(), b.scenarios.end(), [](const Scenario & s) { return s.is_nominal(); });
    if (nominal_it == b.scenarios.end()) {
      throw IncompleteAnalysisError("no nominal scenario");
    }
    const KpiAggregate & nominal = kpis_of(b.kpis, nominal_it->id);

    AcceptanceVerdict nominal_verdict = acceptance_check(nominal, nominal, b.criteria);
    nominal_verdict.hazard_ids = link_hazards(nominal, inputs.registry);
    b.verdicts.push_back(std::move(nominal_verdict));
    for (const auto & row : b.residual_analysis) {
      AcceptanceVerdict v = acceptance_check(nominal, kpis_of(b.kpis, row.scenario_id), b.criteria);
      v.hazard_ids = row.linked_hazard_ids;
      b.verdicts.push_back(std::move(v));
    }
  });

  run_stage("trace", [&] {
    for (const auto & s : b.scenarios) {
      const SimTrace trace = simulate(s, options.sim, derive_seed(s.seed, std::uint64_t{0}));
      result.traces.emplace_back(s.id, trace_to_jsonl(trace, compute_kpis(trace, s)));
    }
  });
  return result;
}

// ---------------------------------------------------------------------------
// output

namespace
{

void write_file(const std::filesystem::path & path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) {
    throw DocumentError(DocumentError::Kind::io, "cannot write '" + path.string() + "'");
  }
}

std::string mitigations_to_csv(std::span<const MitigationComparison> rows)
{
  std::string out =
    "mitigation,before,after,collision_rate_before,collision_rate_after,"
    "false_activation_rate_before,false_activation_rate_after,gap_min_before,gap_min_after,"
    "impact_speed_max_before,impact_speed_max_after\n";
  for (const auto & r : rows) {
    const std::array<std::string, 11> fields{
      detail::csv_escape(r.mitigation_id),
      detail::csv_escape(r.before_id),
      detail::csv_escape(r.after_id),
      detail::format_double(r.before.collision_rate),
      detail::format_double(r.after.collision_rate),
      detail::format_double(r.before.false_activation_rate),
      detail::format_double(r.after.false_activation_rate),
      detail::format_double(r.before.gap_min),
      detail::format_double(r.after.gap_min),
      detail::format_double(r.before.impact_speed_max),
      detail::format_double(r.after.impact_speed_max)};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += fields[i];
      out += i + 1 < fields.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string fmt(double v, int precision = 4)
{
  if (!std::isfinite(v)) return v > 0 ? "unbounded" : "n/a";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string join(const std::vector<std::string> & items, std::string_view sep)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

void write_bundle(const PipelineResult & result, const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir / "traces", ec);
  if (ec) {
    throw DocumentError(
      DocumentError::Kind::io, "cannot create '" + dir.string() + "': " + ec.message());
  }
  const ReportBundle & b = result.bundle;
  write_file(dir / "bundle.json", bundle_to_json(b));
  write_file(dir / "kpis.csv", kpi_aggregates_to_csv(b.kpis));
  write_file(dir / "analysis.csv", analysis_sheet_to_csv(b.analysis));
  write_file(dir / "analysis.json", json(b.analysis).dump(2) + "\n");
  write_file(dir / "risk.csv", risk_results_to_csv(b.risks));
  write_file(dir / "risk.json", json(b.risks).dump(2) + "\n");
  write_file(dir / "mitigations.csv", mitigations_to_csv(b.mitigations));
  write_file(dir / "summary.md", emit_markdown_summary(b));
  for (const auto & [id, jsonl] : result.traces) {
    write_file(dir / "traces" / (id + ".jsonl"), jsonl);
  }
}

std::string emit_markdown_summary(const ReportBundle & bundle)
{
  const HazardRegistry registry;
  std::ostringstream md;
  md << "# SOTIF argumentation summary\n\n";

  const std::size_t failing = static_cast<std::size_t>(std::count_if(
    bundle.verdicts.begin(), bundle.verdicts.end(),
    [](const AcceptanceVerdict & v) { return !v.pass; }));
  if (failing == 0) {
    md << "## all acceptance criteria met\n\n";
  } else {
    md << "## acceptance criteria violated (" << failing << " of " << bundle.verdicts.size()
       << " scenarios)\n\n";
  }

  const auto & m = bundle.metadata;
  md << "- tool version: " << m.tool_version << "\n"
     << "- timestamp: " << (m.timestamp.empty() ? "n/a" : m.timestamp) << "\n"
     << "- ODD: " << bundle.odd.id << "\n"
     << "- base seed: " << m.base_seed << ", runs per scenario: " << m.runs_per_scenario
     << ", dt: " << fmt(m.dt) << " s\n"
     << "- triggering conditions: " << bundle.taxonomy.relevant_leaves << " relevant of "
     << bundle.taxonomy.total_leaves << " in the taxonomy\n";
  for (const auto & [name, digest] : m.input_digests) {
    md << "- input " << name << ": `" << digest << "`\n";
  }
  md << "\n";

  const bool nominal_only = std::none_of(
    bundle.scenarios.begin(), bundle.scenarios.end(),
    [](const Scenario & s) { return !s.is_nominal(); });
  if (nominal_only) {
    md << "Nominal-only run: no triggering condition of the taxonomy applies to this ODD.\n\n";
  }
  if (!bundle.odd_violations.empty()) {
    md << "ODD nominal conditions violated:\n\n";
    for (const auto & v : bundle.odd_violations) md << "- " << v << "\n";
    md << "\n";
  }

  md << "## Verdicts\n\n"
     << "| scenario | verdict | violated clauses | hazards |\n"
     << "|---|---|---|---|\n";
  for (const auto & v : bundle.verdicts) {
    std::vector<std::string> clauses;
    for (const auto & c : v.violations) {
      clauses.push_back(c.clause + " (" + fmt(c.measured) + " vs " + fmt(c.threshold) + ")");
    }
    md << "| " << v.scenario_id << " | " << (v.pass ? "pass" : "FAIL") << " | "
       << (clauses.empty() ? "-" : join(clauses, "; ")) << " | "
       << (v.hazard_ids.empty() ? "-" : join(v.hazard_ids, ", ")) << " |\n";
  }
  md << "\n";

  std::map<std::string, std::vector<std::string>> failing_by_hazard;
  for (const auto & v : bundle.verdicts) {
    if (v.pass) continue;
    for (const auto & h : v.hazard_ids) failing_by_hazard[h].push_back(v.scenario_id);
  }
  for (const auto & [hazard_id, ids] : failing_by_hazard) {
    md << "### " << hazard_id;
    if (const Hazard * h = registry.find(hazard_id)) md << ": " << h->description;
    md << "\n\nViolating scenarios:\n\n";
    for (const auto & id : ids) md << "- " << id << "\n";
    md << "\n";
  }

  md << "## Worst hours to hazard\n\n";
  const RiskResult * worst = nullptr;
  for (const auto & r : bundle.risks) {
    if (r.hours_to_hazard && (!worst || *r.hours_to_hazard < *worst->hours_to_hazard)) {
      worst = &r;
    }
  }
  if (worst) {
    md << fmt(*worst->hours_to_hazard) << " h";
    if (worst->km_to_hazard) md << " (" << fmt(*worst->km_to_hazard) << " km)";
    md << " until " << worst->hazard_id << " in scenario " << worst->scenario_id << "\n\n";
  } else {
    md << "No hazardous behaviour observed; hours to hazard unbounded.\n\n";
  }

  md << "## Residual risks\n\n"
     << "| scenario | hazard | S | O | risk | rate [1/h] | hours to hazard |\n"
     << "|---|---|---|---|---|---|---|\n";
  std::vector<const RiskResult *> sorted;
  for (const auto & r : bundle.risks) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const RiskResult * a, const RiskResult * b) {
    return a->risk_level > b->risk_level;
  });
  for (const RiskResult * r : sorted) {
    md << "| " << r->scenario_id << " | " << (r->hazard_id.empty() ? "-" : r->hazard_id) << " | "
       << to_string(r->severity) << " | " << to_string(r->occurrence_class) << " | "
       << to_string(r->risk_level) << " | " << fmt(r->hazard_rate_per_hour) << " | "
       << (r->hours_to_hazard ? fmt(*r->hours_to_hazard) : std::string("unbounded")) << " |\n";
  }
  md << "\n";

  if (!bundle.mitigations.empty()) {
    md << "## Mitigations\n\n"
       << "| mitigation | before | after | collision rate | false activation rate | min gap [m] |\n"
       << "|---|---|---|---|---|---|\n";
    for (const auto & c : bundle.mitigations) {
      md << "| " << c.mitigation_id << " | " << c.before_id << " | " << c.after_id << " | "
         << fmt(c.before.collision_rate) << " -> " << fmt(c.after.collision_rate) << " | "
         << fmt(c.before.false_activation_rate) << " -> " << fmt(c.after.false_activation_rate)
         << " | " << fmt(c.before.gap_min) << " -> " << fmt(c.after.gap_min) << " |\n";
    }
    md << "\n";
  }
  return md.str();
}

std::string sha256_hex(std::string_view data)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0f];
  }
  return out;
}

}  // namespace sotif
