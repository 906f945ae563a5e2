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

#include "sotif/taxonomy.hpp"

#include "json_util.hpp"
#include "sotif/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <regex>
#include <utility>

namespace sotif
{

using nlohmann::json;

std::string_view to_string(Intensity intensity)
{
  switch (intensity) {
    case Intensity::light:
      return "light";
    case Intensity::medium:
      return "medium";
    case Intensity::heavy:
      return "heavy";
  }
  return "unknown";
}

std::optional<Intensity> parse_intensity(std::string_view token)
{
  if (token == "light") return Intensity::light;
  if (token == "medium") return Intensity::medium;
  if (token == "heavy") return Intensity::heavy;
  return std::nullopt;
}

namespace
{

// Lines on which each node id is declared, in text order. nlohmann::json does
// not keep source positions, so ids are located with a lexical scan.
class IdLineIndex
{
public:
  explicit IdLineIndex(std::string_view text)
  {
    static const std::regex id_decl(R"re("id"\s*:\s*"((?:[^"\\]|\\.)*)")re");
    const std::string owned(text);
    for (auto it = std::sregex_iterator(owned.begin(), owned.end(), id_decl);
         it != std::sregex_iterator(); ++it) {
      const auto loc = detail::location_of_offset(text, static_cast<std::size_t>(it->position(0)));
      lines_[(*it)[1].str()].push_back(loc);
    }
  }

  std::vector<SourceLocation> locate(const std::string & id, const std::string & pointer) const
  {
    std::vector<SourceLocation> out;
    if (const auto it = lines_.find(id); it != lines_.end()) {
      out = it->second;
    }
    if (out.empty()) {
      out.push_back(SourceLocation{});
    }
    for (auto & loc : out) {
      loc.pointer = pointer;
    }
    return out;
  }

private:
  std::map<std::string, std::vector<SourceLocation>> lines_;
};

std::string line_suffix(const std::vector<SourceLocation> & locs)
{
  std::string out;
  for (const auto & loc : locs) {
    if (loc.line == 0) {
      continue;
    }
    out += out.empty() ? " (line " : ", line ";
    out += std::to_string(loc.line);
  }
  if (!out.empty()) {
    out += ")";
  }
  return out;
}

class TaxonomyReader
{
public:
  explicit TaxonomyReader(std::string_view text) : index_(text) {}

  Taxonomy read(const json & doc)
  {
    if (!doc.is_object()) {
      detail::schema_error("", "taxonomy document must be a JSON object");
    }
    detail::reject_unknown_keys(doc, {"version", "roots"}, "");
    const auto version = doc.find("version");
    if (version == doc.end() || !version->is_number_integer() || version->get<int>() != 1) {
      detail::schema_error("/version", "'version' must be the integer 1");
    }
    const auto roots = doc.find("roots");
    if (roots == doc.end() || !roots->is_array() || roots->empty()) {
      detail::schema_error("/roots", "'roots' must be a non-empty array");
    }

    Taxonomy taxonomy;
    taxonomy.version = 1;
    for (std::size_t i = 0; i < roots->size(); ++i) {
      const std::string pointer = "/roots/" + std::to_string(i);
      TaxonomyNode root = read_node((*roots)[i], pointer);
      if (root.is_leaf()) {
        const auto locs = index_.locate(root.id, pointer);
        throw DocumentError(
          DocumentError::Kind::schema,
          "root '" + root.id + "' must be a category with children" + line_suffix(locs), locs);
      }
      taxonomy.roots.push_back(std::move(root));
    }
    return taxonomy;
  }

private:
  TaxonomyNode read_node(const json & j, const std::string & pointer)
  {
    if (!j.is_object()) {
      detail::schema_error(pointer, "node must be a JSON object");
    }
    detail::reject_unknown_keys(j, {"id", "name", "odd_tags", "children", "intensity"}, pointer);

    TaxonomyNode node;
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
      detail::schema_error(pointer, "'id' must be a non-empty string");
    }
    node.id = id->get<std::string>();
    const auto locs = index_.locate(node.id, pointer);

    if (const auto [it, inserted] = seen_.emplace(node.id, pointer); !inserted) {
      auto both = index_.locate(node.id, it->second);
      if (both.size() >= 2) {
        both[1].pointer = pointer;
      } else {
        both.push_back(SourceLocation{0, 0, pointer});
      }
      throw DocumentError(
        DocumentError::Kind::duplicate_id,
        "duplicate id '" + node.id + "' at " + it->second + " and " + pointer + line_suffix(both),
        both);
    }

    const auto name = j.find("name");
    if (name == j.end() || !name->is_string()) {
      detail::schema_error(pointer, "'name' must be a string");
    }
    node.name = name->get<std::string>();

    if (const auto tags = j.find("odd_tags"); tags != j.end()) {
      if (!tags->is_array()) {
        detail::schema_error(pointer, "'odd_tags' must be an array of strings");
      }
      for (const auto & tag : *tags) {
        if (!tag.is_string()) {
          detail::schema_error(pointer, "'odd_tags' must be an array of strings");
        }
        node.odd_tags.insert(tag.get<std::string>());
      }
    }

    const auto children = j.find("children");
    const auto intensity = j.find("intensity");
    if (children != j.end() && intensity != j.end()) {
      throw DocumentError(
        DocumentError::Kind::child_bearing_leaf,
        "node '" + node.id + "' has both children and an intensity" + line_suffix(locs), locs);
    }
    if (intensity != j.end()) {
      const auto parsed =
        intensity->is_string() ? parse_intensity(intensity->get<std::string>()) : std::nullopt;
      if (!parsed) {
        throw DocumentError(
          DocumentError::Kind::unknown_intensity,
          "node '" + node.id + "' has unknown intensity " + intensity->dump() +
            " (expected light, medium or heavy)" + line_suffix(locs),
          locs);
      }
      node.intensity = parsed;
    }
    if (children != j.end()) {
      if (!children->is_array()) {
        detail::schema_error(pointer, "'children' must be an array");
      }
      if (children->empty()) {
        throw DocumentError(
          DocumentError::Kind::empty_category,
          "category '" + node.id + "' has an empty children list" + line_suffix(locs), locs);
      }
      for (std::size_t i = 0; i < children->size(); ++i) {
        node.children.push_back(
          read_node((*children)[i], pointer + "/children/" + std::to_string(i)));
      }
    }
    return node;
  }

  IdLineIndex index_;
  std::map<std::string, std::string> seen_;  // id -> pointer of first declaration
};

nlohmann::ordered_json node_to_json(const TaxonomyNode & node)
{
  nlohmann::ordered_json j;
  j["id"] = node.id;
  j["name"] = node.name;
  j["odd_tags"] = node.odd_tags;
  if (!node.is_leaf()) {
    j["children"] = nlohmann::ordered_json::array();
    for (const auto & child : node.children) {
      j["children"].push_back(node_to_json(child));
    }
  } else if (node.intensity) {
    j["intensity"] = to_string(*node.intensity);
  }
  return j;
}

void collect_leaves(
  const TaxonomyNode & node, std::vector<std::string> & path, std::vector<std::string> & names,
  TagSet tags, std::vector<TriggeringCondition> & out)
{
  tags.insert(node.odd_tags.begin(), node.odd_tags.end());
  if (node.is_leaf()) {
    TriggeringCondition tc;
    tc.leaf_id = node.id;
    tc.leaf_name = node.name;
    tc.category_path = path;
    tc.category_names = names;
    tc.intensity = node.intensity;
    tc.odd_tags = std::move(tags);
    out.push_back(std::move(tc));
    return;
  }
  path.push_back(node.id);
  names.push_back(node.name);
  for (const auto & child : node.children) {
    collect_leaves(child, path, names, tags, out);
  }
  path.pop_back();
  names.pop_back();
}

void validate_node(const TaxonomyNode & node, std::map<std::string, int> & seen)
{
  if (node.id.empty()) {
    throw DocumentError(DocumentError::Kind::schema, "node with empty id");
  }
  if (++seen[node.id] > 1) {
    throw DocumentError(DocumentError::Kind::duplicate_id, "duplicate id '" + node.id + "'");
  }
  if (!node.is_leaf() && node.intensity) {
    throw DocumentError(
      DocumentError::Kind::child_bearing_leaf,
      "node '" + node.id + "' has both children and an intensity");
  }
  for (const auto & child : node.children) {
    validate_node(child, seen);
  }
}

}  // namespace

Taxonomy parse_taxonomy(std::string_view document)
{
  const json doc = detail::parse_json_document(document, "taxonomy");
  return TaxonomyReader(document).read(doc);
}

Taxonomy load_taxonomy(const std::filesystem::path & path)
{
  return parse_taxonomy(detail::read_text_file(path));
}

std::string serialize_taxonomy(const Taxonomy & taxonomy)
{
  nlohmann::ordered_json doc;
  doc["version"] = taxonomy.version;
  doc["roots"] = nlohmann::ordered_json::array();
  for (const auto & root : taxonomy.roots) {
    doc["roots"].push_back(node_to_json(root));
  }
  return doc.dump(2) + "\n";
}

void validate_taxonomy(const Taxonomy & taxonomy)
{
  if (taxonomy.version != 1) {
    throw DocumentError(DocumentError::Kind::schema, "unsupported taxonomy version");
  }
  if (taxonomy.roots.empty()) {
    throw DocumentError(DocumentError::Kind::schema, "taxonomy has no root category");
  }
  std::map<std::string, int> seen;
  for (const auto & root : taxonomy.roots) {
    if (root.is_leaf()) {
      throw DocumentError(
        DocumentError::Kind::schema, "root '" + root.id + "' must be a category with children");
    }
    validate_node(root, seen);
  }
}

std::vector<TriggeringCondition> enumerate_leaves(const Taxonomy & taxonomy)
{
  std::vector<TriggeringCondition> out;
  std::vector<std::string> path;
  std::vector<std::string> names;
  for (const auto & root : taxonomy.roots) {
    collect_leaves(root, path, names, {}, out);
  }
  return out;
}

std::vector<TriggeringCondition> filter_by_odd(
  std::span<const TriggeringCondition> conditions, const TagSet & odd_tags)
{
  std::vector<TriggeringCondition> out;
  for (const auto & tc : conditions) {
    const bool relevant = std::any_of(
      tc.odd_tags.begin(), tc.odd_tags.end(),
      [&](const std::string & tag) { return odd_tags.count(tag) > 0; });
    if (relevant) {
      out.push_back(tc);
    }
  }
  return out;
}

}  // namespace sotif
