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
#include "sotif/errors.hpp"
#include "sotif/risk.hpp"

#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace sotif
{
namespace
{

const std::filesystem::path kData{SOTIF_DATA_DIR};

constexpr std::array kSeverities{Severity::S0, Severity::S1, Severity::S2, Severity::S3};
constexpr std::array kClasses{
  OccurrenceClass::O1, OccurrenceClass::O2, OccurrenceClass::O3, OccurrenceClass::O4};

KpiAggregate kpis(const std::string & id, double gap_min, double collision = 0.0, double fa = 0.0)
{
  KpiAggregate k;
  k.scenario_id = id;
  k.odd_id = "reference-odd";
  k.runs = 100;
  k.gap_min = k.gap_mean = k.gap_max = gap_min;
  k.collision_rate = collision;
  k.false_activation_rate = fa;
  k.ttc_min = k.ttc_mean = 2.89;
  return k;
}

AcceptanceCriteria criteria(double gap = 0.2, double collision = 0.0, double fa = 0.01, double ttc = 1.5)
{
  return AcceptanceCriteria{gap, collision, fa, ttc};
}

TEST(RiskMatrix, Corners)
{
  EXPECT_EQ(risk_level(Severity::S0, OccurrenceClass::O4), RiskLevel::negligible);
  EXPECT_EQ(risk_level(Severity::S3, OccurrenceClass::O4), RiskLevel::high);
  EXPECT_EQ(risk_level(Severity::S2, OccurrenceClass::O2), RiskLevel::low);
}

TEST(RiskMatrix, DefaultMonotoneOverAllCells)
{
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t o = 0; o < 4; ++o) {
      const RiskLevel r = risk_level(kSeverities[s], kClasses[o]);
      if (s > 0) EXPECT_GE(r, risk_level(kSeverities[s - 1], kClasses[o]));
      if (o > 0) EXPECT_GE(r, risk_level(kSeverities[s], kClasses[o - 1]));
    }
  }
  EXPECT_TRUE(RiskMatrix::is_monotone(RiskMatrix{}.table()));
}

TEST(RiskMatrix, NonMonotoneTableRejected)
{
  RiskMatrix::Table t = RiskMatrix{}.table();
  t[3][0] = RiskLevel::high;
  t[3][1] = RiskLevel::low;
  EXPECT_FALSE(RiskMatrix::is_monotone(t));
  EXPECT_THROW(RiskMatrix{t}, ParameterDomainError);
}

TEST(OccurrenceBins, Classification)
{
  const OccurrenceBins bins;
  EXPECT_EQ(bins.classify(0.0), OccurrenceClass::O1);
  EXPECT_EQ(bins.classify(1e-6), OccurrenceClass::O1);
  EXPECT_EQ(bins.classify(1e-4), OccurrenceClass::O2);
  EXPECT_EQ(bins.classify(0.02), OccurrenceClass::O3);
  EXPECT_EQ(bins.classify(0.5), OccurrenceClass::O4);
}

TEST(HazardRate, OneMultiplication)
{
  const auto r = hazard_rate(OccurrenceSpec{"wet", 0.01, "test"}, 1.0);
  EXPECT_DOUBLE_EQ(r.rate_per_hour, 0.01);
  ASSERT_TRUE(r.hours_to_hazard.has_value());
  EXPECT_DOUBLE_EQ(*r.hours_to_hazard, 100.0);
}

TEST(HazardRate, ZeroProbabilityIsUnbounded)
{
  const auto r = hazard_rate(OccurrenceSpec{"wet", 0.01, "test"}, 0.0);
  EXPECT_EQ(r.rate_per_hour, 0.0);
  EXPECT_FALSE(r.hours_to_hazard.has_value());
}

TEST(HazardRate, ZeroExposure)
{
  EXPECT_EQ(hazard_rate(OccurrenceSpec{"wet", 0.0, "test"}, 1.0).rate_per_hour, 0.0);
}

TEST(HazardRate, LinearAndReciprocal)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exposure(1e-6, 2.0);
  std::uniform_real_distribution<double> prob(1e-4, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double e = exposure(rng);
    const double p = prob(rng);
    const auto r = hazard_rate(OccurrenceSpec{"c", e, ""}, p);
    EXPECT_NEAR(r.rate_per_hour, e * p, 1e-15);
    EXPECT_NEAR(hazard_rate(OccurrenceSpec{"c", 2 * e, ""}, p).rate_per_hour, 2 * r.rate_per_hour, 1e-14);
    EXPECT_NEAR(hazard_rate(OccurrenceSpec{"c", e, ""}, p / 2).rate_per_hour, r.rate_per_hour / 2, 1e-15);
    EXPECT_NEAR(*r.hours_to_hazard * r.rate_per_hour, 1.0, 1e-12);
  }
}

TEST(HazardRate, RejectsInvalidProbability)
{
  EXPECT_THROW(hazard_rate(OccurrenceSpec{"c", 0.1, ""}, 1.5), ParameterDomainError);
  EXPECT_THROW(hazard_rate(OccurrenceSpec{"c", -0.1, ""}, 0.5), ParameterDomainError);
}

TEST(AcceptanceCheck, SelfComparisonPasses)
{
  const auto nominal = kpis("nominal", 6.956);
  const auto v = acceptance_check(nominal, nominal, criteria());
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(v.violations.empty());
}

TEST(AcceptanceCheck, SelfComparisonPassesForRandomCriteria)
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double fa = unit(rng);
    auto nominal = kpis("nominal", 1.0 + 10.0 * unit(rng), 0.0, fa * unit(rng));
    const AcceptanceCriteria c{unit(rng), unit(rng), fa, 2.0 * unit(rng)};
    EXPECT_TRUE(acceptance_check(nominal, nominal, c).pass);
  }
}

TEST(AcceptanceCheck, CollisionViolatesClause)
{
  const auto v = acceptance_check(kpis("nominal", 6.956), kpis("wet", 0.0, 1.0), criteria(2.0));
  EXPECT_FALSE(v.pass);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].clause, "max_collision_rate");
  EXPECT_EQ(v.violations[0].measured, 1.0);
}

TEST(AcceptanceCheck, GapDegradationWithinAllowance)
{
  const auto v = acceptance_check(kpis("nominal", 10.0), kpis("fog", 9.0), criteria(0.2));
  EXPECT_TRUE(v.pass);
  const auto w = acceptance_check(kpis("nominal", 10.0), kpis("fog", 7.0), criteria(0.2));
  ASSERT_FALSE(w.pass);
  EXPECT_EQ(w.violations[0].clause, "max_final_gap_degradation");
  EXPECT_NEAR(w.violations[0].measured, 0.3, 1e-12);
}

TEST(AcceptanceCheck, TtcClauseIgnoresRunsWithoutTrigger)
{
  auto never = kpis("far", 6.956);
  never.ttc_min.reset();
  never.ttc_mean.reset();
  EXPECT_TRUE(acceptance_check(kpis("nominal", 6.956), never, criteria()).pass);
  auto late = kpis("late", 6.956);
  late.ttc_min = 1.0;
  EXPECT_FALSE(acceptance_check(kpis("nominal", 6.956), late, criteria()).pass);
}

TEST(AcceptanceCheck, DifferentOddRejected)
{
  auto other = kpis("x", 6.956);
  other.odd_id = "highway";
  EXPECT_THROW(acceptance_check(kpis("nominal", 6.956), other, criteria()), InvalidComparisonError);
}

class ResidualRisk : public ::testing::Test
{
protected:
  void SetUp() override
  {
    EffectModel wet;
    wet.mu_factor = 0.5;
    scenarios_ = {test::nominal_scenario(), test::condition_scenario("surface-wet", wet)};
    auto k = kpis("surface-wet", 0.0, 1.0);
    k.impact_speed_max = 7.85;
    sweeps_ = {kpis("nominal", 6.956), k};
    AnalysisRow row;
    row.scenario_id = "surface-wet";
    row.leaf_id = "surface-wet";
    row.severity = Severity::S2;
    row.linked_hazard_ids = {"H1"};
    sheet_ = {row};
    occurrences_ = {OccurrenceSpec{"surface-wet", 0.02, "test"}};
  }

  std::vector<RiskResult> evaluate() const
  {
    return evaluate_residual_risk(sheet_, sweeps_, occurrences_, scenarios_, HazardRegistry{}, SeverityRules{});
  }

  std::vector<Scenario> scenarios_;
  std::vector<KpiAggregate> sweeps_;
  std::vector<AnalysisRow> sheet_;
  std::vector<OccurrenceSpec> occurrences_;
};

TEST_F(ResidualRisk, FrictionRow)
{
  const auto results = evaluate();
  ASSERT_EQ(results.size(), 1u);
  const RiskResult & r = results[0];
  EXPECT_EQ(r.hazard_id, "H1");
  EXPECT_EQ(r.severity, Severity::S2);
  EXPECT_DOUBLE_EQ(r.hazard_rate_per_hour, 0.02);
  ASSERT_TRUE(r.hours_to_hazard.has_value());
  EXPECT_DOUBLE_EQ(*r.hours_to_hazard, 50.0);
  EXPECT_EQ(r.occurrence_class, OccurrenceClass::O3);
  EXPECT_EQ(r.risk_level, risk_level(Severity::S2, OccurrenceClass::O3));
  ASSERT_TRUE(r.km_to_hazard.has_value());
  EXPECT_NEAR(*r.km_to_hazard, 50.0 * 50.0, 1e-9);
}

TEST_F(ResidualRisk, RowWithoutHazardIsNegligible)
{
  sheet_[0].linked_hazard_ids.clear();
  sweeps_[1] = kpis("surface-wet", 6.0);
  const auto results = evaluate();
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].risk_level, RiskLevel::negligible);
  EXPECT_FALSE(results[0].hours_to_hazard.has_value());
  EXPECT_TRUE(results[0].hazard_id.empty());
}

TEST_F(ResidualRisk, TwoHazardsGiveTwoResults)
{
  sheet_[0].linked_hazard_ids = {"H1", "H2"};
  sweeps_[1].false_activation_rate = 0.1;
  const auto results = evaluate();
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[1].hazard_id, "H2");
  EXPECT_DOUBLE_EQ(results[1].hazard_rate_per_hour, 0.002);
}

TEST_F(ResidualRisk, MissingOccurrenceNamesLeaf)
{
  occurrences_.clear();
  try {
    evaluate();
    FAIL();
  } catch (const IncompleteOccurrenceError & e) {
    EXPECT_EQ(e.leaf_id(), "surface-wet");
  }
}

TEST_F(ResidualRisk, CsvWritesUnboundedAsInf)
{
  sheet_[0].linked_hazard_ids.clear();
  const std::string csv = risk_results_to_csv(evaluate());
  EXPECT_EQ(
    csv.substr(0, csv.find('\n')),
    "scenario,hazard,S,O_class,risk,rate_per_hour,hours_to_hazard,km_to_hazard");
  EXPECT_NE(csv.find(",inf,inf"), std::string::npos);
}

TEST(ParseDocuments, Fixtures)
{
  const auto occ = load_occurrences(kData / "occurrence.json");
  EXPECT_EQ(occ.size(), 27u);
  const auto c = load_criteria(kData / "criteria.json");
  EXPECT_EQ(c.max_collision_rate, 0.0);
  EXPECT_EQ(c.min_ttc_at_trigger, 1.5);
  EXPECT_THROW(parse_criteria(R"({"max_collision_rate": 2})"), DocumentError);
  EXPECT_THROW(parse_occurrences(R"([{"leaf_id": "x", "exposure_rate": -1, "source": ""}])"), DocumentError);
}

}  // namespace
}  // namespace sotif
