#include "fixtures.hpp"
#include "oracles.hpp"

#include "reqont/agreement.hpp"
#include "reqont/text.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace reqont;
using namespace reqont::testing;

namespace {

std::vector<std::string> all_strings(std::size_t max_length, std::string_view alphabet) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

std::vector<ExtractionRecord> load_dir(const fs::path& dir, const TaxonomySchema& schema) {
  auto loaded = load_extractions(dir, schema);
  EXPECT_TRUE(loaded.findings.empty());
  return loaded.records;
}

}  // namespace

TEST(Similarity, FrozenReferenceValues) {
  // Expected ratios computed with Python's difflib (autojunk off), taking
  // the better of both argument orders.
  struct Case {
    const char* a;
    const char* b;
    double expected;
  };
  const Case cases[] = {
      {"ab", "bacb", 2.0 * 2 / 6},
      {"abcd", "bcda", 0.75},
      {"kitten", "sitting", 8.0 / 13},
      {"Subflows are mechanisms for reuse", "Subflows are a mechanism of reuse", 60.0 / 66},
      {"", "", 1.0},
      {"", "abc", 0.0},
      {"abc", "abc", 1.0},
      {"WIKIMEDIA", "WIKIMANIA", 14.0 / 18},
      {"GESTALT PATTERN MATCHING", "GESTALT PRACTICE", 0.65},
      {"passive voice", "voix passive", 0.56},
      {"M\xC3\xA9ndez Fern\xC3\xA1ndez", "Mendez Fernandez", 0.875},
      {"aaaa", "aa", 4.0 / 6},
      {"abcabc", "cbacba", 0.5},
      {"impacted negatively", "impacted positively", 30.0 / 38},
  };
  for (const auto& c : cases) EXPECT_NEAR(similarity(c.a, c.b), c.expected, 1e-12) << c.a << " | " << c.b;
}

TEST(Similarity, OrientationMatters) {
  const std::u32string a = U"ab";
  const std::u32string b = U"bacb";
  EXPECT_EQ(matched_characters(a, b), 2u);
  EXPECT_EQ(matched_characters(b, a), 1u);
  EXPECT_DOUBLE_EQ(gestalt_ratio(a, b), gestalt_ratio(b, a));
}

TEST(Similarity, MatchesOracleExhaustivelyUpToLengthFive) {
  const auto strings = all_strings(5, "abc");
  for (const auto& a : strings) {
    const std::u32string ua(a.begin(), a.end());
    for (const auto& b : strings) {
      const std::u32string ub(b.begin(), b.end());
      ASSERT_EQ(matched_characters(ua, ub), oracle::matching_blocks(a, b)) << a << " | " << b;
    }
  }
}

TEST(Similarity, PropertiesOnRandomUnicodePairs) {
  std::mt19937 rng(99);
  const std::vector<std::string> pieces{"a", "b", "\xC3\xA9", "\xE2\x82\xAC", " ", "\xF0\x9F\x98\x80"};
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::uniform_int_distribution<std::size_t> piece(0, pieces.size() - 1);
  const auto random_text = [&] {
    std::string s;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) s += pieces[piece(rng)];
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = random_text();
    const std::string b = random_text();
    const double r = similarity(a, b);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    EXPECT_EQ(r, similarity(b, a));
    EXPECT_EQ(r == 1.0, a == b);
    EXPECT_EQ(similarity(a, a), 1.0);
    const auto ua = text::to_code_points(a);
    const auto ub = text::to_code_points(b);
    EXPECT_NEAR(r, oracle::ratio(ua, ub), 1e-12);
  }
}

TEST(Similarity, NoNormalizationOfInputs) {
  EXPECT_LT(similarity("Use Case", "use case"), 1.0);
  EXPECT_LT(similarity("caf\xC3\xA9", "cafe\xCC\x81"), 1.0);
}

TEST(Agreement, IdenticalExtractionsAgreeFully) {
  const auto schema = parse_structure(read_file(kSeedDir / "structure.json"));
  const auto records = load_dir(kSeedDir / "extractions", schema);
  const auto report = agreement_report(records, records, schema);
  EXPECT_DOUBLE_EQ(report.mean_agreement, 100.0);
  // factor 12 + 1 note, description 5 + 2, dataset 5 + 2, approach 9 + 1.
  EXPECT_EQ(report.n_values, 37u);
}

TEST(Agreement, SixValueFixture) {
  const auto dir = kFixtureDir / "agreement";
  const auto schema = parse_structure(read_file(dir / "structure.json"));
  const auto report = agreement_report(load_dir(dir / "a", schema), load_dir(dir / "b", schema), schema);
  EXPECT_EQ(report.n_values, 6u);
  EXPECT_NEAR(report.mean_agreement, 500.0 / 6.0, 1e-9);
  EXPECT_EQ(format_summary(report), "n=6, agreement=83.33%");
}

TEST(Agreement, SummaryFormatting) {
  AgreementReport report;
  report.n_values = 799;
  report.mean_agreement = 85.03;
  EXPECT_EQ(format_summary(report), "n=799, agreement=85.03%");
  report.n_values = 3;
  report.mean_agreement = 200.0 / 3.0;
  EXPECT_EQ(format_summary(report), "n=3, agreement=66.67%");
}

TEST(Agreement, UnmatchedObjectsScoreZero) {
  const auto dir = kFixtureDir / "agreement";
  const auto schema = parse_structure(read_file(dir / "structure.json"));
  const auto a = load_dir(dir / "a", schema);
  auto b = load_dir(dir / "b", schema);
  b[0].objects[0].notes["name"] = "y";
  b[0].objects[0].id = "factor:y";
  const auto report = agreement_report(a, b, schema);
  EXPECT_EQ(report.n_values, 12u);
  EXPECT_DOUBLE_EQ(report.mean_agreement, 0.0);
}

TEST(Agreement, ScopeNotesScoredBySimilarity) {
  const auto dir = kFixtureDir / "agreement";
  const auto schema = parse_structure(read_file(dir / "structure.json"));
  auto a = load_dir(dir / "a", schema);
  auto b = load_dir(dir / "a", schema);
  // Alignment is by factor name, so keep the name and vary nothing else:
  // then drop the name note on one side to score it against "".
  b[0].objects[0].notes.erase("name");
  const auto report = agreement_report(a, b, schema);
  EXPECT_EQ(report.n_values, 6u);
  EXPECT_NEAR(report.mean_agreement, 100.0 * 5.0 / 6.0, 1e-9);
}

TEST(Agreement, ReferencesOnlyOnOneSideAreListed) {
  const auto schema = parse_structure(read_file(kSeedDir / "structure.json"));
  const auto records = load_dir(kSeedDir / "extractions", schema);
  const std::vector<ExtractionRecord> one{records[0]};
  const auto report = agreement_report(records, one, schema);
  EXPECT_EQ(report.references_compared, std::vector<std::string>{records[0].reference.key});
  EXPECT_EQ(report.references_only_in_a, std::vector<std::string>{records[1].reference.key});
  EXPECT_TRUE(report.references_only_in_b.empty());
}

TEST(Agreement, NoOverlapIsAnError) {
  const auto schema = parse_structure(read_file(kSeedDir / "structure.json"));
  const auto records = load_dir(kSeedDir / "extractions", schema);
  EXPECT_THROW(agreement_report({records[0]}, {records[1]}, schema), EmptyComparison);
}

TEST(Agreement, AlignmentRequiresSameReference) {
  const auto schema = parse_structure(read_file(kSeedDir / "structure.json"));
  const auto records = load_dir(kSeedDir / "extractions", schema);
  EXPECT_THROW(align_objects(records[0], records[1], schema), ReferenceMismatch);
}

TEST(Agreement, JsonReportShape) {
  const auto dir = kFixtureDir / "agreement";
  const auto schema = parse_structure(read_file(dir / "structure.json"));
  const auto report = agreement_report(load_dir(dir / "a", schema), load_dir(dir / "b", schema), schema, {"ann", "bob"});
  const auto j = to_json(report);
  for (const char* key : {"pair", "n_values", "mean_agreement", "per_reference", "per_attribute"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["pair"], nlohmann::json::array({"ann", "bob"}));
  EXPECT_EQ(j["n_values"], 6);
}
