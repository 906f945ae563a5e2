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

#include "json_util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sotif::detail
{

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DocumentError(
      DocumentError::Kind::io, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw DocumentError(DocumentError::Kind::io, "failed reading '" + path.string() + "'");
  }
  return buffer.str();
}

SourceLocation location_of_offset(std::string_view text, std::size_t offset)
{
  offset = std::min(offset, text.size());
  SourceLocation loc;
  loc.line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      line_start = i + 1;
    }
  }
  loc.column = offset - line_start + 1;
  return loc;
}

nlohmann::json parse_json_document(std::string_view text, std::string_view what)
{
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error & e) {
    // e.byte is 1-based and points just past the offending character
    const auto loc = location_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw DocumentError(
      DocumentError::Kind::syntax,
      std::string(what) + ": syntax error at line " + std::to_string(loc.line) + ", column " +
        std::to_string(loc.column) + ": " + e.what(),
      {loc});
  }
}

void schema_error(const std::string & pointer, const std::string & message)
{
  SourceLocation loc;
  loc.pointer = pointer.empty() ? "/" : pointer;
  throw DocumentError(DocumentError::Kind::schema, loc.pointer + ": " + message, {loc});
}

void reject_unknown_keys(
  const nlohmann::json & object, std::initializer_list<std::string_view> allowed,
  const std::string & pointer)
{
  for (const auto & item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      schema_error(pointer, "unknown key '" + item.key() + "'");
    }
  }
}

double require_number(const nlohmann::json & object, const char * key, const std::string & pointer)
{
  const auto it = object.find(key);
  if (it == object.end() || !it->is_number()) {
    schema_error(pointer, std::string("'") + key + "' must be a number");
  }
  return it->get<double>();
}

std::string format_double(double value)
{
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string csv_escape(std::string_view field)
{
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace sotif::detail
