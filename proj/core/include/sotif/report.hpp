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

#ifndef SOTIF__REPORT_HPP_
#define SOTIF__REPORT_HPP_

#include "sotif/analysis.hpp"
#include "sotif/errors.hpp"
#include "sotif/risk.hpp"
#include "sotif/scenario.hpp"
#include "sotif/simulator.hpp"
#include "sotif/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sotif
{

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Pipeline failure tagged with the stage that raised it.
class StageError : public Error
{
public:
  StageError(std::string stage, const std::string & what);
  const std::string & stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

/// Expert-tunable settings of the analysis and risk stages.
struct AnalysisConfig
{
  SeverityRules severity_rules;
  Controllability controllability{Controllability::C3};
  OccurrenceBins occurrence_bins;
  RiskMatrix risk_matrix;

  friend bool operator==(const AnalysisConfig &, const AnalysisConfig &) = default;
};

AnalysisConfig parse_analysis_config(std::string_view document);
AnalysisConfig load_analysis_config(const std::filesystem::path & path);

struct RunMetadata
{
  std::string tool_version{kToolVersion};
  std::string timestamp;  // the only field allowed to differ between identical runs
  std::uint64_t base_seed{0};
  std::size_t runs_per_scenario{0};
  double dt{0.0};
  double perception_tick{0.0};
  double max_time{0.0};
  std::map<std::string, std::string> input_digests;  // input name -> sha256 hex

  friend bool operator==(const RunMetadata &, const RunMetadata &) = default;
};

struct TaxonomySummary
{
  std::size_t total_leaves{0};
  std::size_t relevant_leaves{0};
  std::map<std::string, std::size_t> leaves_per_root;
  std::vector<std::string> excluded_leaf_ids;

  friend bool operator==(const TaxonomySummary &, const TaxonomySummary &) = default;
};

/// KPIs of a scenario before and after one mitigation step.
struct MitigationComparison
{
  std::string mitigation_id;
  std::string before_id;
  std::string after_id;
  KpiAggregate before;
  KpiAggregate after;

  friend bool operator==(const MitigationComparison &, const MitigationComparison &) = default;
};

struct ReportBundle
{
  RunMetadata metadata;
  TaxonomySummary taxonomy;
  OddDefinition odd;
  std::vector<std::string> odd_violations;
  AcceptanceCriteria criteria;
  std::vector<Scenario> scenarios;
  std::vector<KpiAggregate> kpis;
  std::vector<AnalysisRow> analysis;       // triggering conditions, before mitigation
  std::vector<MitigationComparison> mitigations;
  std::vector<AnalysisRow> residual_analysis;  // final state of every condition
  std::vector<RiskResult> risks;
  std::vector<AcceptanceVerdict> verdicts;

  bool all_passed() const;
  /// Ids referenced by any table but missing from `scenarios`.
  std::vector<std::string> dangling_references() const;

  friend bool operator==(const ReportBundle &, const ReportBundle &) = default;
};

struct PipelineInputs
{
  Taxonomy taxonomy;
  OddDefinition odd;
  EffectMapping mapping;
  std::vector<OccurrenceSpec> occurrences;
  AcceptanceCriteria criteria;
  std::vector<MitigationSpec> mitigations;
  AnalysisConfig config;
  HazardRegistry registry;
  std::map<std::string, std::string> input_digests;
};

struct PipelineOptions
{
  std::uint64_t seed{0};
  std::size_t runs{100};
  SimConfig sim;
  std::size_t workers{0};
  std::string timestamp;
};

struct PipelineResult
{
  ReportBundle bundle;
  /// JSON-lines trace of run 0 of every scenario, keyed by scenario id.
  std::vector<std::pair<std::string, std::string>> traces;
};

/**
 * @brief filter -> generate -> sweep -> analyze -> mitigate -> risk -> acceptance.
 *
 * Mitigations targeting a condition are applied cumulatively in file order;
 * risk and acceptance use the last scenario of each chain.
 *
 * @throws StageError naming the stage that failed.
 */
PipelineResult run_pipeline(const PipelineInputs & inputs, const PipelineOptions & options);

/// Writes bundle.json, the CSV/JSON tables, summary.md and traces/ under `dir`.
void write_bundle(const PipelineResult & result, const std::filesystem::path & dir);

/// Reads bundle.json back.
ReportBundle read_bundle(const std::filesystem::path & dir);

std::string bundle_to_json(const ReportBundle & bundle);
ReportBundle bundle_from_json(std::string_view document);

std::string emit_markdown_summary(const ReportBundle & bundle);

std::string sha256_hex(std::string_view data);

}  // namespace sotif

#endif  // SOTIF__REPORT_HPP_
