#pragma once

#include "reqont/corpus.hpp"
#include "reqont/finding.hpp"
#include "reqont/schema.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqont {

enum class ChangeKind {
  add_dimension,
  remove_dimension,
  merge_dimensions,
  split_dimension,
  add_characteristic,
  remove_characteristic,
  merge_characteristics,
  split_characteristic,
  merge_objects,
  split_objects,
  add_taxonomy,
};

std::string to_string(ChangeKind kind);
std::optional<ChangeKind> parse_change_kind(std::string_view text);
bool is_merge_or_split(ChangeKind kind);
bool is_addition(ChangeKind kind);  // add-dimension, add-characteristic, add-taxonomy

struct ChangeEvent {
  ChangeKind kind;
  std::string taxonomy;
  std::string details;

  bool operator==(const ChangeEvent&) const = default;
};

enum class DevelopmentApproach { empirical_to_conceptual, conceptual_to_empirical };

struct IterationLog {
  int iteration = 1;
  DevelopmentApproach approach = DevelopmentApproach::empirical_to_conceptual;
  std::vector<std::string> examined_references;
  std::vector<ChangeEvent> events;

  bool operator==(const IterationLog&) const = default;
};

/// Parses `iterations.json`; iteration numbers must be unique and
/// contiguous from 1 (in any order in the file). Result is sorted.
std::vector<IterationLog> parse_iterations(std::string_view raw);

struct CorpusManifest {
  std::vector<std::string> candidate_references;
};

CorpusManifest parse_manifest(std::string_view raw);

enum class Verdict { pass, fail, not_evaluable };
std::string to_string(Verdict v);

struct ConditionResult {
  Verdict verdict = Verdict::not_evaluable;
  std::string evidence;

  bool operator==(const ConditionResult&) const = default;
};

/// EC1..EC5 keyed by "EC1".."EC5".
using EndingConditions = std::map<std::string, ConditionResult>;

struct ValidationReport {
  std::vector<Finding> schema_violations;
  std::vector<Finding> object_violations;
  std::vector<Finding> link_errors;
  std::vector<Finding> conflicts;
  std::optional<EndingConditions> ending_conditions;
  std::vector<Finding> lints;

  /// True when nothing of severity error was found (lints and conflicts allowed).
  bool ok() const;
  /// All findings in report order.
  std::vector<Finding> all_findings() const;
};

/// Object-level checks that need only the schema: every required dimension
/// has a value (missing-value) and every required scope note is present and
/// non-blank (missing-scope-note).
std::vector<Finding> check_record(const TaxonomySchema& schema, const ExtractionRecord& record);

/// Schema, object and conflict findings for a built snapshot. A snapshot
/// cannot hold link errors, so that section is always empty here.
ValidationReport validate_corpus(const OntologySnapshot& snapshot);

struct CorpusCheck {
  ValidationReport report;
  std::optional<OntologySnapshot> snapshot;
};

/// Full pipeline over parsed records: schema validation, object checks,
/// snapshot construction (LinkError / DuplicateReference become findings),
/// conflicts and lints. `upstream` carries findings from file loading
/// (FieldErrors) and is merged into object_violations.
CorpusCheck check_corpus(const TaxonomySchema& schema, std::vector<ExtractionRecord> records,
                         std::vector<Finding> upstream = {});

/// EC1..EC5 for the snapshot. `manifest` absent or empty -> EC1 not
/// evaluable; `logs` empty -> EC2 and EC4 not evaluable.
EndingConditions check_ending_conditions(const OntologySnapshot& snapshot, const std::vector<IterationLog>& logs,
                                         const std::optional<CorpusManifest>& manifest);

/// Characteristics of expanded dimensions that no object takes, as
/// "<taxonomy>.<dimension>:<characteristic>", in schema order.
std::vector<std::string> uncovered_characteristics(const OntologySnapshot& snapshot);

/// CONCISENESS warnings (dimension count, clusters counted once, outside
/// [5, 9]) and UNIQUE-CELL notes (same characteristics everywhere, told
/// apart only by scope notes).
std::vector<Finding> lint(const OntologySnapshot& snapshot);

inline constexpr std::size_t kConciseMin = 5;
inline constexpr std::size_t kConciseMax = 9;

/// Subjective ending conditions that stay with the curators.
struct SubjectiveCondition {
  std::string name;
  std::string status;
};
std::vector<SubjectiveCondition> subjective_conditions();

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const EndingConditions& conditions);
std::string to_text(const ValidationReport& report);
std::string to_text(const EndingConditions& conditions);

}  // namespace reqont
