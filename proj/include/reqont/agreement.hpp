#pragma once

#include "reqont/corpus.hpp"
#include "reqont/schema.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reqont {

/// Total length K of the Ratcliff/Obershelp matching blocks: take the
/// longest common contiguous block (ties: smallest start in `a`, then in
/// `b`), then recurse on the left and right flanks.
std::size_t matched_characters(std::u32string_view a, std::u32string_view b);

/// Gestalt ratio 2K / (|a| + |b|). The block search above depends on which
/// text comes first (("ab", "bacb") matches 2 characters, the reverse only
/// 1), so K is the larger of both orientations; the ratio is then symmetric
/// and still 1 only for equal texts. Two empty texts give 1.0.
double gestalt_ratio(std::u32string_view a, std::u32string_view b);

/// gestalt_ratio over the Unicode code points of two UTF-8 texts, with no
/// normalization of the inputs.
double similarity(std::string_view a, std::string_view b);

/// Identity of an object for alignment: the factor name for factors, the
/// described factor name(s) for descriptions, the name note otherwise
/// (falling back to the id slug), always normalized.
struct AlignmentKey {
  std::string taxonomy;
  std::string name;

  auto operator<=>(const AlignmentKey&) const = default;
};

AlignmentKey alignment_key(const OntologyObject& object, const TaxonomySchema& schema);

/// One aligned pair; a null side is ABSENT.
struct AlignedPair {
  AlignmentKey key;
  const OntologyObject* a = nullptr;
  const OntologyObject* b = nullptr;
};

/// Pairs objects of two extractions of the same reference by alignment key.
/// Objects sharing a key are paired in id order. Throws ReferenceMismatch.
std::vector<AlignedPair> align_objects(const ExtractionRecord& a, const ExtractionRecord& b,
                                       const TaxonomySchema& schema);

enum class AttributeKind { dimension, scope_note };
std::string to_string(AttributeKind kind);

struct ValueScore {
  std::string reference;
  AlignmentKey object_key;
  std::string attribute;
  AttributeKind kind = AttributeKind::dimension;
  double score = 0.0;
};

struct AgreementReport {
  std::pair<std::string, std::string> pair;
  std::vector<std::string> references_compared;
  std::vector<std::string> references_only_in_a;
  std::vector<std::string> references_only_in_b;
  std::vector<ValueScore> value_scores;  // sorted by (reference, object, attribute)
  std::size_t n_values = 0;
  double mean_agreement = 100.0;  // percent; 100 when there is nothing to compare
};

/// Dimensions score 1/0 by equality, scope notes by similarity (absent side
/// = empty text). Objects without a counterpart score 0 on every attribute
/// they carry. Throws EmptyComparison when no reference key overlaps.
AgreementReport agreement_report(const std::vector<ExtractionRecord>& a, const std::vector<ExtractionRecord>& b,
                                 const TaxonomySchema& schema,
                                 std::pair<std::string, std::string> extractor_ids = {"A", "B"});

/// "n=<values>, agreement=<mean with two decimals>%".
std::string format_summary(const AgreementReport& report);

nlohmann::json to_json(const AgreementReport& report);
std::string to_text(const AgreementReport& report);

}  // namespace reqont
