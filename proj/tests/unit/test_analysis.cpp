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

#include "oracles.hpp"
#include "sotif/analysis.hpp"
#include "sotif/errors.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

namespace sotif
{
namespace
{

KpiAggregate kpis(const std::string & id, double collision_rate, double fa_rate, double impact = 0.0)
{
  KpiAggregate k;
  k.scenario_id = id;
  k.odd_id = "reference-odd";
  k.runs = 100;
  k.collision_rate = collision_rate;
  k.false_activation_rate = fa_rate;
  k.impact_speed_max = impact;
  return k;
}

EffectModel effects(double range, double ghost, double mu, double rho_add)
{
  EffectModel e;
  e.perception_range_factor = range;
  e.ghost_rate = ghost;
  e.mu_factor = mu;
  e.rho_add = rho_add;
  return e;
}

TEST(ClassifySubsystems, SnowHitsPerceptionSense)
{
  EXPECT_EQ(
    classify_affected_subsystems(effects(0.5, 0.02, 1, 0)), SubsystemSet{Subsystem::perception_sense});
}

TEST(ClassifySubsystems, SlipperySurfaceHitsActuation)
{
  EXPECT_EQ(classify_affected_subsystems(effects(1, 0, 0.5, 0)), SubsystemSet{Subsystem::actuation});
}

TEST(ClassifySubsystems, NeutralHitsNothing)
{
  EXPECT_TRUE(classify_affected_subsystems(EffectModel::neutral()).empty());
}

TEST(ClassifySubsystems, DelayAndAlgorithmFlag)
{
  EffectModel e = effects(1, 0, 1, 0.3);
  e.perception_algo = true;
  EXPECT_EQ(
    classify_affected_subsystems(e), (SubsystemSet{Subsystem::perception_algo, Subsystem::decision}));
}

TEST(HazardRegistry, ShipsBothHazards)
{
  const HazardRegistry r;
  ASSERT_NE(r.find("H1"), nullptr);
  ASSERT_NE(r.find("H2"), nullptr);
  EXPECT_EQ(
    r.find("H1")->description,
    "a collision due to the inability to completely brake before reaching an obstacle");
  EXPECT_EQ(
    r.find("H2")->description,
    "activation of the emergency brake due to a false object detection");
  EXPECT_EQ(r.find("H1")->default_severity, Severity::S3);
  EXPECT_EQ(r.find("H2")->default_severity, Severity::S1);
}

TEST(HazardRegistry, DuplicateIdRejected)
{
  HazardRegistry r;
  EXPECT_THROW(r.add(Hazard{"H1", "again", Severity::S1, HazardIndicator::none}), Error);
  r.add(Hazard{"H3", "unintended acceleration", Severity::S2, HazardIndicator::none});
  EXPECT_TRUE(r.contains("H3"));
}

TEST(LinkHazards, CollisionOnly)
{
  EXPECT_EQ(link_hazards(kpis("wet", 1.0, 0.0, 7.85), HazardRegistry{}), std::vector<std::string>{"H1"});
}

TEST(LinkHazards, FalseActivationOnly)
{
  EXPECT_EQ(link_hazards(kpis("snow", 0.0, 0.8), HazardRegistry{}), std::vector<std::string>{"H2"});
}

TEST(LinkHazards, NothingEvidenced)
{
  EXPECT_TRUE(link_hazards(kpis("dry", 0.0, 0.0), HazardRegistry{}).empty());
}

TEST(SeverityRules, MonotoneInImpactSpeed)
{
  const SeverityRules rules;
  Severity previous = Severity::S0;
  for (int i = 0; i <= 300; ++i) {
    const Severity s = rules.for_collision(0.1 * i);
    EXPECT_GE(s, previous);
    previous = s;
  }
  EXPECT_EQ(rules.for_collision(0.0), Severity::S0);
  EXPECT_EQ(rules.for_collision(3.0), Severity::S1);
  EXPECT_EQ(rules.for_collision(7.85), Severity::S2);
  EXPECT_EQ(rules.for_collision(12.0), Severity::S3);
}

TEST(SeverityRules, InvalidOrderingRejected)
{
  SeverityRules rules;
  rules.s2_min_impact_speed = 20.0;
  EXPECT_THROW(rules.validate(), ParameterDomainError);
}

class AnalysisSheet : public ::testing::Test
{
protected:
  void SetUp() override
  {
    scenarios_ = {
      test::nominal_scenario(), test::condition_scenario("snow-heavy", effects(0.5, 0.02, 1, 0)),
      test::condition_scenario("surface-wet", effects(1, 0, 0.5, 0))};
    sweeps_ = {
      kpis("nominal", 0, 0), kpis("snow-heavy", 0, 0.8), kpis("surface-wet", 1.0, 0, 7.85)};
  }

  std::vector<Scenario> scenarios_;
  std::vector<KpiAggregate> sweeps_;
};

TEST_F(AnalysisSheet, OneRowPerCondition)
{
  const auto rows = build_analysis_sheet(scenarios_, sweeps_, HazardRegistry{}, SeverityRules{});
  ASSERT_EQ(rows.size(), scenarios_.size() - 1);
  for (const auto & r : rows) EXPECT_NE(r.scenario_id, "nominal");
}

TEST_F(AnalysisSheet, SnowRow)
{
  const auto rows = build_analysis_sheet(scenarios_, sweeps_, HazardRegistry{}, SeverityRules{});
  const AnalysisRow & snow = rows[0];
  EXPECT_EQ(snow.leaf_id, "snow-heavy");
  EXPECT_EQ(snow.affected_subsystems, SubsystemSet{Subsystem::perception_sense});
  EXPECT_EQ(snow.severity, Severity::S1);
  EXPECT_EQ(snow.controllability, Controllability::C3);
  EXPECT_EQ(snow.linked_hazard_ids, std::vector<std::string>{"H2"});
  EXPECT_FALSE(snow.rationale.empty());
}

TEST_F(AnalysisSheet, WetRow)
{
  const auto rows = build_analysis_sheet(scenarios_, sweeps_, HazardRegistry{}, SeverityRules{});
  const AnalysisRow & wet = rows[1];
  EXPECT_EQ(wet.affected_subsystems, SubsystemSet{Subsystem::actuation});
  EXPECT_EQ(wet.severity, Severity::S2);
  EXPECT_EQ(wet.linked_hazard_ids, std::vector<std::string>{"H1"});
}

TEST_F(AnalysisSheet, LinkedHazardsResolve)
{
  const HazardRegistry registry;
  for (const auto & r : build_analysis_sheet(scenarios_, sweeps_, registry, SeverityRules{})) {
    for (const auto & h : r.linked_hazard_ids) EXPECT_TRUE(registry.contains(h));
  }
}

TEST_F(AnalysisSheet, MissingSweepIsIncomplete)
{
  sweeps_.pop_back();
  EXPECT_THROW(
    build_analysis_sheet(scenarios_, sweeps_, HazardRegistry{}, SeverityRules{}),
    IncompleteAnalysisError);
}

TEST_F(AnalysisSheet, CsvColumns)
{
  const auto rows = build_analysis_sheet(scenarios_, sweeps_, HazardRegistry{}, SeverityRules{});
  const std::string csv = analysis_sheet_to_csv(rows);
  EXPECT_EQ(
    csv.substr(0, csv.find('\n')),
    "triggering_condition,category_path,affected_subsystems,severity,controllability,hazards,"
    "rationale");
  EXPECT_NE(csv.find("surface-wet,Environmental conditions,actuation,S2,C3,H1,"), std::string::npos);
}

}  // namespace
}  // namespace sotif
