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

#ifndef SOTIF__TAXONOMY_HPP_
#define SOTIF__TAXONOMY_HPP_

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sotif
{

enum class Intensity { light, medium, heavy };

std::string_view to_string(Intensity intensity);
std::optional<Intensity> parse_intensity(std::string_view token);

using TagSet = std::set<std::string>;

/// Node of the triggering-conditions tree. A node without children is a leaf
/// condition; only leaves may carry an intensity.
struct TaxonomyNode
{
  std::string id;
  std::string name;
  std::vector<TaxonomyNode> children;
  std::optional<Intensity> intensity;
  TagSet odd_tags;

  bool is_leaf() const noexcept { return children.empty(); }

  friend bool operator==(const TaxonomyNode &, const TaxonomyNode &) = default;
};

struct Taxonomy
{
  int version{1};
  std::vector<TaxonomyNode> roots;  // main categories

  friend bool operator==(const Taxonomy &, const Taxonomy &) = default;
};

/// A leaf of the taxonomy together with the path that leads to it.
struct TriggeringCondition
{
  std::string leaf_id;
  std::string leaf_name;
  std::vector<std::string> category_path;   // ancestor ids, root category first
  std::vector<std::string> category_names;  // display names matching category_path
  std::optional<Intensity> intensity;
  TagSet odd_tags;  // own tags plus the tags of every ancestor

  friend bool operator==(const TriggeringCondition &, const TriggeringCondition &) = default;
};

/**
 * @brief Parse a taxonomy JSON document and check every tree invariant.
 *
 * Diagnostics carry 1-based line numbers of the offending nodes. A duplicate
 * id reports every line on which the id is declared.
 *
 * @throws DocumentError
 */
Taxonomy parse_taxonomy(std::string_view document);

/// Reads and parses a taxonomy file. I/O failures are reported as DocumentError::Kind::io.
Taxonomy load_taxonomy(const std::filesystem::path & path);

/// Canonical JSON form (fixed key order, two-space indent, sorted tags).
std::string serialize_taxonomy(const Taxonomy & taxonomy);

/// Checks the invariants of an in-memory tree (unique ids, categorical roots,
/// no intensity on inner nodes).
void validate_taxonomy(const Taxonomy & taxonomy);

/// Depth-first, document-order list of all leaves.
std::vector<TriggeringCondition> enumerate_leaves(const Taxonomy & taxonomy);

/// Keeps the conditions that share at least one tag with `odd_tags`, in order.
std::vector<TriggeringCondition> filter_by_odd(
  std::span<const TriggeringCondition> conditions, const TagSet & odd_tags);

}  // namespace sotif

#endif  // SOTIF__TAXONOMY_HPP_
