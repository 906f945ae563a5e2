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

#ifndef SOTIF__ERRORS_HPP_
#define SOTIF__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sotif
{

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside the domain of the operation.
class ParameterDomainError : public Error
{
public:
  using Error::Error;
};

/// Location of a diagnostic inside a source document (1-based; 0 = unknown).
struct SourceLocation
{
  std::size_t line{0};
  std::size_t column{0};
  std::string pointer;  // JSON pointer of the offending node, if known
};

/// Malformed or semantically invalid document (taxonomy, ODD, mapping, ...).
class DocumentError : public Error
{
public:
  enum class Kind {
    syntax,
    schema,
    duplicate_id,
    empty_category,
    child_bearing_leaf,
    unknown_intensity,
    io,
  };

  DocumentError(Kind kind, std::string message, std::vector<SourceLocation> locations = {});

  Kind kind() const noexcept { return kind_; }
  const std::vector<SourceLocation> & locations() const noexcept { return locations_; }

private:
  Kind kind_;
  std::vector<SourceLocation> locations_;
};

class UnmappedConditionError : public Error
{
public:
  explicit UnmappedConditionError(std::string leaf_id);
  const std::string & leaf_id() const noexcept { return leaf_id_; }

private:
  std::string leaf_id_;
};

class InvalidMitigationError : public Error
{
public:
  using Error::Error;
};

/// Non-finite state inside the integrator. Aborts the run.
class IntegrationError : public Error
{
public:
  using Error::Error;
};

/// A precondition on a result object (e.g. a terminated trace) does not hold.
class ContractViolation : public Error
{
public:
  using Error::Error;
};

/// Sweep failure tagged with the scenario that produced it.
class SimulationError : public Error
{
public:
  SimulationError(std::string scenario_id, const std::string & what);
  const std::string & scenario_id() const noexcept { return scenario_id_; }

private:
  std::string scenario_id_;
};

class IncompleteAnalysisError : public Error
{
public:
  using Error::Error;
};

class IncompleteOccurrenceError : public Error
{
public:
  explicit IncompleteOccurrenceError(std::string leaf_id);
  const std::string & leaf_id() const noexcept { return leaf_id_; }

private:
  std::string leaf_id_;
};

class InvalidComparisonError : public Error
{
public:
  using Error::Error;
};

}  // namespace sotif

#endif  // SOTIF__ERRORS_HPP_
