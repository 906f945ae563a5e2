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

#include "cli.hpp"

#include "sotif/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace sotif::cli
{
namespace
{

namespace fs = std::filesystem;

struct RunArgs
{
  std::string odd;
  std::string taxonomy;
  std::string mapping;
  std::string occurrence;
  std::string criteria;
  std::string mitigations;
  std::string config;
  std::string out_dir;
  std::string timestamp;
  std::uint64_t seed{0};
  std::size_t runs{100};
  std::size_t workers{0};
  double dt{0.001};
  double perception_tick{0.05};
  double max_time{60.0};
  bool no_gate{false};
};

std::string utc_now()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string slurp(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DocumentError(DocumentError::Kind::io, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_document_error(std::ostream & err, const std::string & path, const DocumentError & e)
{
  if (e.locations().empty()) {
    err << path << ": error: " << e.what() << "\n";
    return;
  }
  for (const auto & loc : e.locations()) {
    err << path << ":" << loc.line << ":" << loc.column << ": error: " << e.what();
    if (!loc.pointer.empty()) err << " [" << loc.pointer << "]";
    err << "\n";
  }
}

std::size_t count_categories(const TaxonomyNode & node)
{
  if (node.is_leaf()) return 0;
  std::size_t n = 1;
  for (const auto & c : node.children) n += count_categories(c);
  return n;
}

int cmd_taxonomy_validate(const std::string & path, std::ostream & out, std::ostream & err)
{
  try {
    const Taxonomy t = load_taxonomy(path);
    std::size_t categories = 0;
    for (const auto & r : t.roots) categories += count_categories(r);
    out << path << ": ok, " << enumerate_leaves(t).size() << " leaves in " << categories
        << " categories\n";
    return kOk;
  } catch (const DocumentError & e) {
    print_document_error(err, path, e);
  } catch (const Error & e) {
    err << path << ": error: " << e.what() << "\n";
  }
  return kStageFailed;
}

// Loads one input file, recording its digest; errors name the "load" stage.
template <typename Loader>
auto load_input(
  const std::string & name, const std::string & path, PipelineInputs & inputs, Loader && loader)
{
  try {
    const std::string text = slurp(path);
    inputs.input_digests[name] = sha256_hex(text);
    return loader(text);
  } catch (const DocumentError & e) {
    std::ostringstream where;
    const auto & locs = e.locations();
    where << path;
    if (!locs.empty() && locs.front().line > 0) {
      where << ":" << locs.front().line << ":" << locs.front().column;
    }
    throw StageError("load", where.str() + ": " + e.what());
  } catch (const std::exception & e) {
    throw StageError("load", path + ": " + e.what());
  }
}

int cmd_run(const RunArgs & a, std::ostream & out, std::ostream & err)
{
  PipelineResult result;
  try {
    PipelineInputs in;
    in.odd = load_input("odd", a.odd, in, parse_odd);
    in.taxonomy = load_input("taxonomy", a.taxonomy, in, parse_taxonomy);
    in.mapping = load_input("mapping", a.mapping, in, parse_effect_mapping);
    in.occurrences = load_input("occurrence", a.occurrence, in, parse_occurrences);
    in.criteria = load_input("criteria", a.criteria, in, parse_criteria);
    if (!a.mitigations.empty()) {
      in.mitigations = load_input("mitigations", a.mitigations, in, parse_mitigations);
    }
    if (!a.config.empty()) {
      in.config = load_input("config", a.config, in, parse_analysis_config);
    }

    PipelineOptions opt;
    opt.seed = a.seed;
    opt.runs = a.runs;
    opt.workers = a.workers;
    opt.sim.dt = a.dt;
    opt.sim.perception_tick = a.perception_tick;
    opt.sim.max_time = a.max_time;
    opt.timestamp = a.timestamp.empty() ? utc_now() : a.timestamp;

    result = run_pipeline(in, opt);
    try {
      write_bundle(result, a.out_dir);
    } catch (const std::exception & e) {
      throw StageError("write", e.what());
    }
  } catch (const StageError & e) {
    err << "error: " << e.what() << "\n";
    return kStageFailed;
  }

  const ReportBundle & b = result.bundle;
  const std::size_t conditions = static_cast<std::size_t>(std::count_if(
    b.scenarios.begin(), b.scenarios.end(),
    [](const Scenario & s) { return !s.is_nominal() && s.mitigations.empty(); }));
  out << "wrote " << a.out_dir << ": 1 nominal + " << conditions << " condition scenarios, "
      << b.mitigations.size() << " mitigation steps, " << b.risks.size() << " risk entries\n";

  if (b.all_passed()) {
    out << "acceptance: all criteria met\n";
    return kOk;
  }
  std::set<std::string> hazards;
  err << "acceptance: criteria violated\n";
  for (const auto & v : b.verdicts) {
    if (v.pass) continue;
    err << "  " << v.scenario_id << ":";
    for (const auto & c : v.violations) err << " " << c.clause;
    if (!v.hazard_ids.empty()) {
      err << " [";
      for (std::size_t i = 0; i < v.hazard_ids.size(); ++i) {
        err << (i ? " " : "") << v.hazard_ids[i];
        hazards.insert(v.hazard_ids[i]);
      }
      err << "]";
    }
    err << "\n";
  }
  if (!hazards.empty()) {
    err << "hazards:";
    const HazardRegistry registry;
    for (const auto & h : hazards) {
      err << " " << h;
      if (const Hazard * hz = registry.find(h)) err << " (" << hz->description << ")";
    }
    err << "\n";
  }
  return a.no_gate ? kOk : kGateFailed;
}

int cmd_report(const std::string & dir, const std::string & out_file, std::ostream & out, std::ostream & err)
{
  try {
    const ReportBundle bundle = read_bundle(dir);
    if (const auto dangling = bundle.dangling_references(); !dangling.empty()) {
      err << "error: bundle references unknown scenario '" << dangling.front() << "'\n";
      return kStageFailed;
    }
    const std::string md = emit_markdown_summary(bundle);
    if (out_file.empty()) {
      out << md;
    } else {
      std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
      f << md;
      if (!f) {
        err << "error: cannot write '" << out_file << "'\n";
        return kStageFailed;
      }
    }
    return kOk;
  } catch (const DocumentError & e) {
    print_document_error(err, (fs::path(dir) / "bundle.json").string(), e);
  } catch (const Error & e) {
    err << "error: " << e.what() << "\n";
  }
  return kStageFailed;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Triggering-condition analysis for an emergency braking function", "sotif"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto * taxonomy = app.add_subcommand("taxonomy", "Taxonomy utilities");
  taxonomy->require_subcommand(1);
  auto * validate = taxonomy->add_subcommand("validate", "Parse and validate a taxonomy file");
  std::string taxonomy_path;
  validate->add_option("path", taxonomy_path, "Taxonomy JSON file")->required();

  RunArgs r;
  auto * run_cmd = app.add_subcommand("run", "Run the full analysis and write a report bundle");
  run_cmd->add_option("--odd", r.odd, "ODD definition (JSON)")->required();
  run_cmd->add_option("--taxonomy", r.taxonomy, "Triggering-condition taxonomy (JSON)")->required();
  run_cmd->add_option("--mapping", r.mapping, "Condition to effect mapping (JSON)")->required();
  run_cmd->add_option("--occurrence", r.occurrence, "Occurrence rates (JSON)")->required();
  run_cmd->add_option("--criteria", r.criteria, "Acceptance criteria (JSON)")->required();
  run_cmd->add_option("--mitigations", r.mitigations, "Mitigation list (JSON)");
  run_cmd->add_option("--config", r.config, "Severity, occurrence and risk settings (JSON)");
  run_cmd->add_option("--out", r.out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", r.seed, "Base seed")->capture_default_str();
  run_cmd->add_option("--runs", r.runs, "Monte Carlo runs per scenario")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  run_cmd->add_option("--dt", r.dt, "Integration step [s]")->capture_default_str();
  run_cmd->add_option("--perception-tick", r.perception_tick, "Sensor frame period [s]")
    ->capture_default_str();
  run_cmd->add_option("--max-time", r.max_time, "Simulated time limit [s]")->capture_default_str();
  run_cmd->add_option("--workers", r.workers, "Sweep threads, 0 = all cores")->capture_default_str();
  run_cmd->add_option("--timestamp", r.timestamp, "Timestamp recorded in the bundle (default: now)");
  run_cmd->add_flag("--no-gate", r.no_gate, "Exit 0 even if acceptance criteria fail");

  auto * report = app.add_subcommand("report", "Print the Markdown summary of an existing bundle");
  std::string bundle_dir;
  std::string report_out;
  report->add_option("dir", bundle_dir, "Bundle directory")->required();
  report->add_option("-o,--output", report_out, "Write the summary to a file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion &) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (validate->parsed()) return cmd_taxonomy_validate(taxonomy_path, out, err);
  if (run_cmd->parsed()) return cmd_run(r, out, err);
  return cmd_report(bundle_dir, report_out, out, err);
}

}  // namespace sotif::cli
