#pragma once

#include "reqont/corpus.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reqont {

/// Conjunctive factor filter; absent fields do not constrain.
struct FactorFilter {
  std::optional<std::string> scope;
  std::optional<std::pair<std::string, std::string>> aspect;  // (aspect name, impact characteristic)
  std::optional<std::string> text_query;
  std::optional<bool> has_approach;
  std::optional<bool> has_dataset;
  std::optional<std::string> accessibility;
  std::optional<bool> evidence;
  std::optional<bool> practitioners;
};

/// Throws UnknownCharacteristic if a filter value is not drawn from the schema.
void check_filter(const OntologySnapshot& snapshot, const FactorFilter& filter);

/// Matching factors ordered by normalized key.
std::vector<const FactorNode*> query_factors(const OntologySnapshot& snapshot, const FactorFilter& filter);

struct FactorResources {
  const FactorNode* factor = nullptr;
  std::vector<ObjectRef> descriptions;
  std::vector<ObjectRef> datasets;
  std::vector<ObjectRef> approaches;
  std::vector<std::string> references;
};

/// Accepts a normalized key or any name/alias resolving to one.
/// Throws UnknownFactor.
FactorResources resources_for_factor(const OntologySnapshot& snapshot, std::string_view factor);

struct GapEntry {
  std::string reference;
  std::string object_id;
  std::string factor;  // normalized key, empty for datasets/approaches
  std::string label;

  auto operator<=>(const GapEntry&) const = default;
};

struct GapReport {
  std::vector<GapEntry> factors_without_approach;
  std::vector<GapEntry> factors_without_dataset;
  std::vector<GapEntry> descriptions_without_evidence;
  std::vector<GapEntry> descriptions_without_impact;
  std::vector<GapEntry> undisclosed_resources;
};

GapReport gap_report(const OntologySnapshot& snapshot);

struct AuthorEntry {
  std::vector<std::string> references;
  std::vector<std::string> factors;
  std::vector<ObjectRef> datasets;
  std::vector<ObjectRef> approaches;

  bool operator==(const AuthorEntry&) const = default;
};

std::map<std::string, AuthorEntry> author_index(const OntologySnapshot& snapshot);

struct SummaryStats {
  std::size_t n_references = 0;
  std::size_t n_references_with_factor = 0;
  std::size_t n_factors = 0;
  std::size_t n_descriptions = 0;
  std::size_t n_datasets = 0;
  std::size_t n_approaches = 0;
  std::map<std::size_t, std::size_t> description_count_histogram;  // descriptions per factor -> factors
  std::size_t n_datasets_public = 0;
  std::size_t n_approaches_public = 0;
  std::size_t n_descriptions_with_evidence_or_practitioners = 0;
  std::size_t n_descriptions_with_impact = 0;

  bool operator==(const SummaryStats&) const = default;
};

SummaryStats summary_stats(const OntologySnapshot& snapshot);

/// Accessibility characteristics counted as public for a taxonomy: the
/// built-in set plus the structure file's override table.
std::set<std::string> public_accessibility(const TaxonomySchema& schema, std::string_view taxonomy);

nlohmann::json factor_json(const OntologySnapshot& snapshot, const FactorNode& factor);
nlohmann::json object_entry_json(const OntologySnapshot& snapshot, const ObjectRef& ref);
nlohmann::json to_json(const OntologySnapshot& snapshot, const FactorResources& resources);
nlohmann::json to_json(const GapReport& gaps);
nlohmann::json to_json(const std::map<std::string, AuthorEntry>& authors);
nlohmann::json to_json(const SummaryStats& stats);

std::string to_text(const SummaryStats& stats);
std::string to_text(const GapReport& gaps);
std::string to_text(const std::map<std::string, AuthorEntry>& authors);

}  // namespace reqont
