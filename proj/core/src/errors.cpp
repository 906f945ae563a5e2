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

#include "sotif/errors.hpp"

#include <utility>

namespace sotif
{

DocumentError::DocumentError(Kind kind, std::string message, std::vector<SourceLocation> locations)
: Error(std::move(message)), kind_(kind), locations_(std::move(locations))
{
}

UnmappedConditionError::UnmappedConditionError(std::string leaf_id)
: Error("no effect mapping entry and no default for condition '" + leaf_id + "'"),
  leaf_id_(std::move(leaf_id))
{
}

SimulationError::SimulationError(std::string scenario_id, const std::string & what)
: Error("scenario '" + scenario_id + "': " + what), scenario_id_(std::move(scenario_id))
{
}

IncompleteOccurrenceError::IncompleteOccurrenceError(std::string leaf_id)
: Error("no occurrence data for condition '" + leaf_id + "'"), leaf_id_(std::move(leaf_id))
{
}

}  // namespace sotif
