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

#ifndef SOTIF__JSON_UTIL_HPP_
#define SOTIF__JSON_UTIL_HPP_

#include "sotif/errors.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace sotif::detail
{

std::string read_text_file(const std::filesystem::path & path);

/// Parses `text`; syntax errors become DocumentError with line/column.
nlohmann::json parse_json_document(std::string_view text, std::string_view what);

SourceLocation location_of_offset(std::string_view text, std::size_t offset);

/// Throws a schema DocumentError if `object` holds keys outside `allowed`.
void reject_unknown_keys(
  const nlohmann::json & object, std::initializer_list<std::string_view> allowed,
  const std::string & pointer);

double require_number(const nlohmann::json & object, const char * key, const std::string & pointer);

[[noreturn]] void schema_error(const std::string & pointer, const std::string & message);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Quotes a CSV field when it contains separators, quotes or line breaks.
std::string csv_escape(std::string_view field);

}  // namespace sotif::detail

#endif  // SOTIF__JSON_UTIL_HPP_
