#pragma once

#include "reqont/finding.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqont {

/// One categorical attribute. Every object of the taxonomy takes exactly one
/// of `characteristics`; `default_value` is filled in when an extraction
/// omits the dimension.
struct DimensionDef {
  std::string name;
  std::vector<std::string> characteristics;
  std::optional<std::string> default_value;
  bool required = true;

  bool allows(std::string_view characteristic) const;

  bool operator==(const DimensionDef&) const = default;
};

/// Shorthand for several dimensions sharing one characteristic set.
struct ClusterDef {
  std::string name;
  std::vector<std::string> members;
  std::vector<std::string> characteristics;
  std::optional<std::string> default_value;

  bool operator==(const ClusterDef&) const = default;
};

struct ScopeNoteDef {
  std::string name;
  bool required = false;

  bool operator==(const ScopeNoteDef&) const = default;
};

struct RelationDef {
  std::string name;
  std::string target_taxonomy;
  std::uint32_t min_cardinality = 0;
  std::optional<std::uint32_t> max_cardinality;  // nullopt = unbounded

  bool admits(std::size_t count) const {
    return count >= min_cardinality && (!max_cardinality || count <= *max_cardinality);
  }

  bool operator==(const RelationDef&) const = default;
};

struct TaxonomyDef {
  std::string name;
  std::vector<DimensionDef> dimensions;
  std::vector<ClusterDef> dimension_clusters;
  std::vector<ScopeNoteDef> scope_notes;
  std::vector<RelationDef> relations;

  const ScopeNoteDef* find_scope_note(std::string_view note) const;
  const RelationDef* find_relation(std::string_view relation) const;

  bool operator==(const TaxonomyDef&) const = default;
};

/// The ontology structure: the collection of all taxonomy structures.
/// `public_accessibility` extends the built-in sets of accessibility
/// characteristics that count as publicly usable, keyed by taxonomy.
struct TaxonomySchema {
  std::int64_t version = 1;
  std::vector<TaxonomyDef> taxonomies;
  std::map<std::string, std::vector<std::string>> public_accessibility;

  const TaxonomyDef* find(std::string_view taxonomy) const;

  bool operator==(const TaxonomySchema&) const = default;
};

/// Parses a structure file. Clusters stay unexpanded; labels are NFC'd and
/// trimmed. Throws ParseError (with line or JSON-pointer context) for bad
/// syntax, unknown keys, wrong kinds, missing fields, version < 1, empty
/// names, empty cluster member lists and dimensions with < 2 characteristics.
TaxonomySchema parse_structure(std::string_view raw);

/// Canonical structure file text (sorted keys, 2-space indent, final newline).
std::string serialize_structure(const TaxonomySchema& schema);
nlohmann::json structure_to_json(const TaxonomySchema& schema);

/// Plain dimensions in declaration order, then "<cluster>.<member>" for each
/// cluster member, sharing the cluster's characteristics and default.
std::vector<DimensionDef> expand_clusters(const TaxonomyDef& taxonomy);

/// Separator used in expanded dimension names.
inline constexpr char kClusterSeparator = '.';

/// Every invariant violation of the structure. Empty means valid.
/// Codes: duplicate-taxonomy, duplicate-dimension, duplicate-characteristic,
/// duplicate-scope-note, duplicate-relation, bad-default,
/// dangling-relation-target, bad-cardinality, unknown-taxonomy.
std::vector<Finding> validate_schema(const TaxonomySchema& schema);

/// Subset of validate_schema codes that concern dimension and
/// characteristic uniqueness.
bool is_uniqueness_violation(const Finding& f);

}  // namespace reqont
