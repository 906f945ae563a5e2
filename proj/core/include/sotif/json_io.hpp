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

// nlohmann::json conversions for the result types. Unbounded or absent
// quantities are written as null.

#ifndef SOTIF__JSON_IO_HPP_
#define SOTIF__JSON_IO_HPP_

#include "sotif/analysis.hpp"
#include "sotif/core_model.hpp"
#include "sotif/report.hpp"
#include "sotif/risk.hpp"
#include "sotif/scenario.hpp"
#include "sotif/simulator.hpp"
#include "sotif/taxonomy.hpp"

#include <nlohmann/json.hpp>

namespace sotif
{

#define SOTIF_DECLARE_JSON(Type)                   \
  void to_json(nlohmann::json & j, const Type & v); \
  void from_json(const nlohmann::json & j, Type & v)

SOTIF_DECLARE_JSON(VehicleParams);
SOTIF_DECLARE_JSON(KinematicState);
SOTIF_DECLARE_JSON(TriggeringCondition);
SOTIF_DECLARE_JSON(OddDefinition);
SOTIF_DECLARE_JSON(EffectModel);
SOTIF_DECLARE_JSON(Scenario);
SOTIF_DECLARE_JSON(SimEvent);
SOTIF_DECLARE_JSON(SimTrace);
SOTIF_DECLARE_JSON(KpiReport);
SOTIF_DECLARE_JSON(KpiAggregate);
SOTIF_DECLARE_JSON(AnalysisRow);
SOTIF_DECLARE_JSON(RiskResult);
SOTIF_DECLARE_JSON(AcceptanceCriteria);
SOTIF_DECLARE_JSON(ClauseViolation);
SOTIF_DECLARE_JSON(AcceptanceVerdict);
SOTIF_DECLARE_JSON(RunMetadata);
SOTIF_DECLARE_JSON(TaxonomySummary);
SOTIF_DECLARE_JSON(MitigationComparison);
SOTIF_DECLARE_JSON(ReportBundle);

#undef SOTIF_DECLARE_JSON

}  // namespace sotif

#endif  // SOTIF__JSON_IO_HPP_
