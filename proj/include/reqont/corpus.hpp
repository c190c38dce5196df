#pragma once

#include "reqont/error.hpp"
#include "reqont/finding.hpp"
#include "reqont/schema.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqont {

struct Reference {
  std::string key;
  std::string title;
  std::vector<std::string> authors;
  std::int64_t year = 0;
  std::string venue;
  std::optional<std::string> doi;
  std::optional<std::string> url;

  bool operator==(const Reference&) const = default;
};

/// Globally unique address of an object: owning reference key plus the
/// object's id within that extraction. Printed as "<reference>#<id>".
struct ObjectRef {
  std::string reference;
  std::string id;

  std::string qualified() const { return reference + "#" + id; }

  auto operator<=>(const ObjectRef&) const = default;
};

/// One classified object. `id` has the form "<taxonomy>:<slug>".
struct OntologyObject {
  std::string id;
  std::string taxonomy;
  std::map<std::string, std::string> values;                   // expanded dimension -> characteristic
  std::map<std::string, std::string> notes;                    // scope note -> text
  std::map<std::string, std::vector<std::string>> relations;  // relation -> ids or factor names

  const std::string* value(std::string_view dimension) const;
  const std::string* note(std::string_view name) const;

  bool operator==(const OntologyObject&) const = default;
};

/// Everything extracted from one reference.
struct ExtractionRecord {
  Reference reference;
  std::vector<OntologyObject> objects;

  const OntologyObject* find(std::string_view id) const;

  bool operator==(const ExtractionRecord&) const = default;
};

/// Parses one extraction file against `schema` and fills defaults for
/// omitted dimensions. Throws ParseError for syntax/shape problems and
/// FieldError (codes: unknown-taxonomy, unknown-dimension,
/// unknown-characteristic, unknown-scope-note, unknown-relation,
/// bad-object-id, duplicate-object-id, invalid-reference) for content
/// that does not fit the schema.
ExtractionRecord parse_extraction(std::string_view raw, const TaxonomySchema& schema);

nlohmann::json object_to_json(const OntologyObject& object);
nlohmann::json reference_to_json(const Reference& reference);
nlohmann::json extraction_to_json(const ExtractionRecord& record);

/// Deterministic bytes: sorted keys, two-space indent, trailing newline.
std::string canonical_serialize(const ExtractionRecord& record);

/// A factor dimension merged over all assertions. `value` is empty when the
/// assertions disagree (the CONFLICT marker); `claims` then lists every
/// asserted value by qualified object reference.
struct MergedValue {
  std::optional<std::string> value;
  std::map<std::string, std::string> claims;

  bool conflict() const { return !value.has_value(); }

  bool operator==(const MergedValue&) const = default;
};

inline constexpr std::string_view kConflictMarker = "CONFLICT";

struct FactorNode {
  std::string canonical_name;
  std::string normalized_key;
  std::vector<ObjectRef> assertions;  // factor objects merged into this node, sorted
  std::map<std::string, MergedValue> merged_values;
  std::vector<std::string> aliases;  // normalized alias keys resolving here
  bool implicit = false;             // only known through descriptions

  bool operator==(const FactorNode&) const = default;
};

struct SnapshotIndexes {
  std::map<std::string, std::vector<ObjectRef>> factor_descriptions;
  std::map<std::string, std::vector<ObjectRef>> factor_datasets;
  std::map<std::string, std::vector<ObjectRef>> factor_approaches;
  std::map<std::string, std::vector<ObjectRef>> reference_objects;
  std::map<std::string, std::vector<std::string>> author_references;
  std::map<ObjectRef, std::vector<std::string>> object_factors;  // factor keys an object links to
  // relation targets after resolution: qualified object refs or factor keys
  std::map<ObjectRef, std::map<std::string, std::vector<std::string>>> resolved_relations;

  bool operator==(const SnapshotIndexes&) const = default;
};

/// Raised by build_snapshot; carries every integrity finding (codes:
/// dangling-relation, relation-wrong-taxonomy, cardinality-breach,
/// factor-without-description, ambiguous-alias).
class LinkError : public Error {
 public:
  explicit LinkError(std::vector<Finding> findings);

  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

/// The resolved corpus. Only build_snapshot creates one, and nothing
/// mutates it afterwards.
class OntologySnapshot {
 public:
  const TaxonomySchema& schema() const { return schema_; }
  const std::map<std::string, ExtractionRecord>& records() const { return records_; }
  const std::map<std::string, FactorNode>& factors() const { return factors_; }
  const SnapshotIndexes& indexes() const { return indexes_; }
  /// Non-fatal findings gathered while merging (conflicting assertions).
  const std::vector<Finding>& warnings() const { return warnings_; }

  const OntologyObject* find(const ObjectRef& ref) const;
  const FactorNode* factor(std::string_view key) const;
  /// Normalizes `name` and follows aliases; nullopt if no such factor.
  std::optional<std::string> resolve_factor(std::string_view name) const;

  /// All objects of one taxonomy, ordered by (reference, position in file).
  std::vector<ObjectRef> objects_of(std::string_view taxonomy) const;

  bool operator==(const OntologySnapshot&) const = default;

 private:
  friend OntologySnapshot build_snapshot(const TaxonomySchema&, std::vector<ExtractionRecord>);

  TaxonomySchema schema_;
  std::map<std::string, ExtractionRecord> records_;
  std::map<std::string, FactorNode> factors_;
  std::map<std::string, std::string> alias_to_key_;
  SnapshotIndexes indexes_;
  std::vector<Finding> warnings_;
};

/// Merges records into a snapshot: factors by normalized name (and declared
/// aliases), every relation resolved, reverse indexes built. Throws
/// DuplicateReference or LinkError; never returns a partial snapshot.
OntologySnapshot build_snapshot(const TaxonomySchema& schema, std::vector<ExtractionRecord> records);

}  // namespace reqont
