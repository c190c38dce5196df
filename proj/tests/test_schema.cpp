#include "fixtures.hpp"

#include "reqont/schema.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace reqont;
using reqont::testing::kSeedDir;

namespace {

TaxonomySchema seed_schema() { return parse_structure(read_file(kSeedDir / "structure.json")); }

std::vector<std::string> codes(const std::vector<Finding>& findings) {
  std::vector<std::string> out;
  for (const auto& f : findings) out.push_back(f.code);
  return out;
}

const TaxonomyDef& taxonomy(const TaxonomySchema& s, std::string_view name) {
  const TaxonomyDef* t = s.find(name);
  if (t == nullptr) throw std::runtime_error("no taxonomy " + std::string(name));
  return *t;
}

}  // namespace

TEST(Schema, SeedHasFourTaxonomies) {
  const auto schema = seed_schema();
  ASSERT_EQ(schema.taxonomies.size(), 4u);
  EXPECT_EQ(schema.taxonomies[0].name, "factor");
  EXPECT_EQ(schema.taxonomies[1].name, "description");
  EXPECT_EQ(schema.taxonomies[2].name, "dataset");
  EXPECT_EQ(schema.taxonomies[3].name, "approach");
  EXPECT_TRUE(validate_schema(schema).empty());
}

TEST(Schema, SeedRelations) {
  const auto schema = seed_schema();
  const RelationDef* describes = taxonomy(schema, "description").find_relation("describes");
  ASSERT_NE(describes, nullptr);
  EXPECT_EQ(describes->target_taxonomy, "factor");
  EXPECT_EQ(describes->min_cardinality, 1u);
  EXPECT_EQ(describes->max_cardinality, 1u);
  const RelationDef* factors = taxonomy(schema, "dataset").find_relation("factors");
  ASSERT_NE(factors, nullptr);
  EXPECT_EQ(factors->min_cardinality, 0u);
  EXPECT_FALSE(factors->max_cardinality.has_value());
}

TEST(Schema, EmptyTaxonomyListIsValidAtParseStage) {
  const auto schema = parse_structure(R"({"version": 1, "taxonomies": []})");
  EXPECT_TRUE(schema.taxonomies.empty());
  EXPECT_TRUE(validate_schema(schema).empty());
}

TEST(Schema, SingleCharacteristicDimensionIsParseError) {
  const char* raw = R"({"version": 1, "taxonomies": [{"name": "t", "dimensions": [
      {"name": "lonely", "characteristics": ["only"]}], "dimension_clusters": [], "scope_notes": [], "relations": []}]})";
  try {
    parse_structure(raw);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos) << e.what();
  }
}

TEST(Schema, UnknownKeysAndWrongKindsAreRejected) {
  EXPECT_THROW(parse_structure(R"({"version": 1, "taxonomies": [], "extra": true})"), ParseError);
  EXPECT_THROW(parse_structure(R"({"version": "1", "taxonomies": []})"), ParseError);
  EXPECT_THROW(parse_structure(R"({"taxonomies": []})"), ParseError);
  EXPECT_THROW(parse_structure(R"({"version": 1, "taxonomies": [)"), ParseError);
}

TEST(Schema, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_structure("{\n  \"version\": 1,\n  \"taxonomies\": [,]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().rfind("line 3", 0), 0u) << e.location();
  }
}

TEST(Schema, MaxCardinalityForms) {
  const auto make = [](const std::string& max) {
    return R"({"version": 1, "taxonomies": [{"name": "a", "dimensions": [], "dimension_clusters": [],
        "scope_notes": [], "relations": [{"name": "r", "target": "a", "min": 0, "max": )" +
           max + "}]}]}";
  };
  EXPECT_EQ(parse_structure(make("3")).taxonomies[0].relations[0].max_cardinality, 3u);
  EXPECT_FALSE(parse_structure(make(R"("unbounded")")).taxonomies[0].relations[0].max_cardinality);
  EXPECT_THROW(parse_structure(make(R"("many")")), ParseError);
  EXPECT_THROW(parse_structure(make("0")), ParseError);
}

TEST(Schema, ClusterExpansion) {
  const auto schema = seed_schema();
  const auto dims = expand_clusters(taxonomy(schema, "factor"));
  std::vector<std::string> names;
  for (const auto& d : dims) names.push_back(d.name);
  const std::vector<std::string> expected{"scope",
                                          "scale",
                                          "automation",
                                          "origin",
                                          "aspect.ambiguity",
                                          "aspect.complexity",
                                          "aspect.consistency",
                                          "aspect.understandability",
                                          "aspect.maintainability",
                                          "aspect.verifiability",
                                          "aspect.correctness",
                                          "aspect.completeness"};
  EXPECT_EQ(names, expected);
  for (std::size_t i = 4; i < dims.size(); ++i) {
    EXPECT_EQ(dims[i].characteristics,
              (std::vector<std::string>{"impacted positively", "impacted negatively", "not impacted"}));
    EXPECT_EQ(dims[i].default_value, "not impacted");
  }
}

TEST(Schema, ExpansionClashIsDuplicateDimension) {
  const auto schema = parse_structure(R"({"version": 1, "taxonomies": [{"name": "t",
      "dimensions": [{"name": "aspect.ambiguity", "characteristics": ["x", "y"]}],
      "dimension_clusters": [{"name": "aspect", "members": ["ambiguity"], "characteristics": ["p", "q"]}],
      "scope_notes": [], "relations": []}]})");
  EXPECT_EQ(codes(validate_schema(schema)), std::vector<std::string>{"duplicate-dimension"});
}

TEST(Schema, ViolationsAreData) {
  auto schema = seed_schema();
  schema.taxonomies[0].dimensions[0].characteristics.push_back("word");
  schema.taxonomies[2].relations[0].target_taxonomy = "nowhere";
  schema.taxonomies[1].dimensions[0].default_value = "maybe";
  schema.taxonomies[3].relations[0].min_cardinality = 5;
  schema.taxonomies[3].relations[0].max_cardinality = 2;
  auto found = codes(validate_schema(schema));
  std::sort(found.begin(), found.end());
  EXPECT_EQ(found, (std::vector<std::string>{"bad-cardinality", "bad-default", "dangling-relation-target",
                                              "duplicate-characteristic"}));
}

TEST(Schema, RoundTripOfSeedIsByteStable) {
  const std::string raw = read_file(kSeedDir / "structure.json");
  const auto schema = parse_structure(raw);
  const std::string once = serialize_structure(schema);
  EXPECT_EQ(once, raw) << "seed structure is stored in canonical form";
  EXPECT_EQ(parse_structure(once), schema);
  EXPECT_EQ(serialize_structure(parse_structure(once)), once);
}

TEST(Schema, PublicAccessibilityOverride) {
  const auto schema = parse_structure(R"({"version": 1, "taxonomies": [],
      "public_accessibility": {"dataset": ["upon request"]}})");
  ASSERT_EQ(schema.public_accessibility.size(), 1u);
  EXPECT_EQ(codes(validate_schema(schema)), std::vector<std::string>{"unknown-taxonomy"});
}
