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
#include "sotif/taxonomy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace sotif
{
namespace
{

const std::filesystem::path kData{SOTIF_DATA_DIR};
const std::filesystem::path kFixtures{SOTIF_FIXTURE_DIR};

std::size_t count_leaves(const TaxonomyNode & node)
{
  if (node.children.empty()) return 1;
  std::size_t n = 0;
  for (const auto & c : node.children) n += count_leaves(c);
  return n;
}

DocumentError parse_error(std::string_view doc)
{
  try {
    parse_taxonomy(doc);
  } catch (const DocumentError & e) {
    return e;
  }
  ADD_FAILURE() << "document was accepted";
  return DocumentError(DocumentError::Kind::io, "unreachable");
}

TEST(ParseTaxonomy, SnowSubtreeHasThreeIntensityLeaves)
{
  const Taxonomy t = load_taxonomy(kFixtures / "taxonomy_snow.json");
  ASSERT_EQ(t.roots.size(), 1u);
  const auto leaves = enumerate_leaves(t);
  ASSERT_EQ(leaves.size(), 3u);
  const std::vector<std::string> path{"environmental-conditions", "weather", "snow"};
  const std::vector<Intensity> intensities{Intensity::light, Intensity::medium, Intensity::heavy};
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    EXPECT_EQ(leaves[i].category_path, path);
    ASSERT_TRUE(leaves[i].intensity.has_value());
    EXPECT_EQ(*leaves[i].intensity, intensities[i]);
    EXPECT_EQ(leaves[i].odd_tags, TagSet{"weather"});
  }
  EXPECT_EQ(leaves[2].leaf_id, "snow-heavy");
  EXPECT_EQ(leaves[2].category_names.back(), "Snow");
}

TEST(ParseTaxonomy, EmptyCategoryIsRejected)
{
  const auto e = parse_error(R"({"version": 1, "roots": [
    {"id": "env", "name": "Env", "children": [{"id": "weather", "name": "Weather", "children": []}]}]})");
  EXPECT_EQ(e.kind(), DocumentError::Kind::empty_category);
  ASSERT_FALSE(e.locations().empty());
  EXPECT_EQ(e.locations().front().line, 2u);
}

TEST(ParseTaxonomy, DuplicateIdReportsBothLocations)
{
  try {
    load_taxonomy(kFixtures / "taxonomy_duplicate_id.json");
    FAIL() << "duplicate id accepted";
  } catch (const DocumentError & e) {
    EXPECT_EQ(e.kind(), DocumentError::Kind::duplicate_id);
    EXPECT_NE(std::string(e.what()).find("snow-heavy"), std::string::npos);
    ASSERT_EQ(e.locations().size(), 2u);
    EXPECT_EQ(e.locations()[0].line, 14u);
    EXPECT_EQ(e.locations()[1].line, 21u);
  }
}

TEST(ParseTaxonomy, SyntaxErrorCarriesLineAndColumn)
{
  try {
    load_taxonomy(kFixtures / "taxonomy_syntax_error.json");
    FAIL() << "syntax error accepted";
  } catch (const DocumentError & e) {
    EXPECT_EQ(e.kind(), DocumentError::Kind::syntax);
    ASSERT_FALSE(e.locations().empty());
    EXPECT_EQ(e.locations().front().line, 4u);
    EXPECT_GT(e.locations().front().column, 0u);
  }
}

TEST(ParseTaxonomy, MissingFileIsIoError)
{
  try {
    load_taxonomy(kFixtures / "does_not_exist.json");
    FAIL();
  } catch (const DocumentError & e) {
    EXPECT_EQ(e.kind(), DocumentError::Kind::io);
  }
}

TEST(ParseTaxonomy, IntensityOnCategoryIsRejected)
{
  const auto e = parse_error(R"({"version": 1, "roots": [{"id": "env", "name": "Env",
    "intensity": "heavy", "children": [{"id": "a", "name": "A"}]}]})");
  EXPECT_EQ(e.kind(), DocumentError::Kind::child_bearing_leaf);
}

TEST(ParseTaxonomy, UnknownIntensityIsRejected)
{
  const auto e = parse_error(R"({"version": 1, "roots": [{"id": "env", "name": "Env",
    "children": [{"id": "a", "name": "A", "intensity": "extreme"}]}]})");
  EXPECT_EQ(e.kind(), DocumentError::Kind::unknown_intensity);
}

TEST(ParseTaxonomy, SchemaViolations)
{
  EXPECT_EQ(parse_error(R"({"version": 2, "roots": []})").kind(), DocumentError::Kind::schema);
  EXPECT_EQ(parse_error(R"({"version": 1, "roots": []})").kind(), DocumentError::Kind::schema);
  EXPECT_EQ(parse_error(R"([1, 2])").kind(), DocumentError::Kind::schema);
  EXPECT_EQ(
    parse_error(R"({"version": 1, "roots": [{"id": "a", "name": "A"}]})").kind(),
    DocumentError::Kind::schema);
  EXPECT_EQ(
    parse_error(R"({"version": 1, "roots": [{"id": "a", "name": "A", "colour": "red",
      "children": [{"id": "b", "name": "B"}]}]})")
      .kind(),
    DocumentError::Kind::schema);
}

TEST(EnumerateLeaves, SingleLeafTree)
{
  const Taxonomy t = parse_taxonomy(
    R"({"version": 1, "roots": [{"id": "env", "name": "Env", "children": [{"id": "only", "name": "Only"}]}]})");
  const auto leaves = enumerate_leaves(t);
  ASSERT_EQ(leaves.size(), 1u);
  EXPECT_EQ(leaves[0].leaf_id, "only");
  EXPECT_FALSE(leaves[0].intensity.has_value());
}

TEST(EnumerateLeaves, FixtureCountMatchesIndependentWalk)
{
  const Taxonomy t = load_taxonomy(kData / "taxonomy.json");
  std::size_t expected = 0;
  std::map<std::string, std::size_t> per_root;
  for (const auto & root : t.roots) {
    per_root[root.id] = count_leaves(root);
    expected += per_root[root.id];
  }
  const auto leaves = enumerate_leaves(t);
  EXPECT_EQ(leaves.size(), expected);
  EXPECT_EQ(leaves.size(), 27u);
  std::map<std::string, std::size_t> seen;
  for (const auto & c : leaves) ++seen[c.category_path.front()];
  EXPECT_EQ(seen, per_root);
}

TEST(SerializeTaxonomy, RoundTripIsFixedPoint)
{
  const Taxonomy t = load_taxonomy(kData / "taxonomy.json");
  const std::string once = serialize_taxonomy(t);
  const Taxonomy back = parse_taxonomy(once);
  EXPECT_EQ(back, t);
  EXPECT_EQ(serialize_taxonomy(back), once);
}

TEST(ValidateTaxonomy, InMemoryDuplicate)
{
  Taxonomy t;
  TaxonomyNode root{"env", "Env", {}, std::nullopt, {}};
  root.children.push_back(TaxonomyNode{"a", "A", {}, std::nullopt, {}});
  root.children.push_back(TaxonomyNode{"a", "A again", {}, std::nullopt, {}});
  t.roots.push_back(root);
  EXPECT_THROW(validate_taxonomy(t), DocumentError);
}

TEST(FilterByOdd, TargetVehicleConditionsExcluded)
{
  const auto leaves = enumerate_leaves(load_taxonomy(kData / "taxonomy.json"));
  const auto kept = filter_by_odd(leaves, TagSet{"static-object", "weather", "road-surface"});
  EXPECT_FALSE(kept.empty());
  for (const auto & c : kept) {
    EXPECT_FALSE(c.odd_tags.contains("target-vehicle")) << c.leaf_id;
  }
  EXPECT_TRUE(std::none_of(kept.begin(), kept.end(), [](const auto & c) {
    return c.leaf_id == "cut-in";
  }));
}

TEST(FilterByOdd, EmptyTagSetKeepsNothing)
{
  const auto leaves = enumerate_leaves(load_taxonomy(kData / "taxonomy.json"));
  EXPECT_TRUE(filter_by_odd(leaves, {}).empty());
}

TEST(FilterByOdd, SharedTagKeepsEverything)
{
  const auto leaves = enumerate_leaves(load_taxonomy(kFixtures / "taxonomy_snow.json"));
  EXPECT_EQ(filter_by_odd(leaves, {"weather"}), leaves);
}

TEST(FilterByOdd, IdempotentAndMonotoneOnRandomTagSets)
{
  const auto leaves = enumerate_leaves(load_taxonomy(kData / "taxonomy.json"));
  const std::vector<std::string> vocabulary{
    "weather", "illumination", "road-surface", "static-object", "sensor", "system",
    "target-vehicle", "unused-tag"};
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 100; ++i) {
    TagSet tags;
    for (const auto & t : vocabulary) {
      if (coin(rng)) tags.insert(t);
    }
    TagSet subset;
    for (const auto & t : tags) {
      if (coin(rng)) subset.insert(t);
    }
    const auto once = filter_by_odd(leaves, tags);
    EXPECT_EQ(filter_by_odd(once, tags), once);
    const auto smaller = filter_by_odd(leaves, subset);
    EXPECT_LE(smaller.size(), once.size());
    for (const auto & c : smaller) {
      EXPECT_NE(std::find(once.begin(), once.end(), c), once.end());
    }
  }
}

}  // namespace
}  // namespace sotif
