#include "reqont/validator.hpp"

#include "reqont/json_util.hpp"
#include "reqont/text.hpp"
#include "reqont/vocabulary.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

namespace reqont {

using json_util::json;
using json_util::ObjectReader;

namespace {

constexpr std::array<std::pair<ChangeKind, std::string_view>, 11> kChangeKinds = {{
    {ChangeKind::add_dimension, "add-dimension"},
    {ChangeKind::remove_dimension, "remove-dimension"},
    {ChangeKind::merge_dimensions, "merge-dimensions"},
    {ChangeKind::split_dimension, "split-dimension"},
    {ChangeKind::add_characteristic, "add-characteristic"},
    {ChangeKind::remove_characteristic, "remove-characteristic"},
    {ChangeKind::merge_characteristics, "merge-characteristics"},
    {ChangeKind::split_characteristic, "split-characteristic"},
    {ChangeKind::merge_objects, "merge-objects"},
    {ChangeKind::split_objects, "split-objects"},
    {ChangeKind::add_taxonomy, "add-taxonomy"},
}};

}  // namespace

std::string to_string(ChangeKind kind) {
  for (const auto& [k, name] : kChangeKinds) {
    if (k == kind) return std::string(name);
  }
  return "unknown";
}

std::optional<ChangeKind> parse_change_kind(std::string_view text) {
  for (const auto& [k, name] : kChangeKinds) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool is_merge_or_split(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::merge_dimensions:
    case ChangeKind::split_dimension:
    case ChangeKind::merge_characteristics:
    case ChangeKind::split_characteristic:
    case ChangeKind::merge_objects:
    case ChangeKind::split_objects:
      return true;
    default:
      return false;
  }
}

bool is_addition(ChangeKind kind) {
  return kind == ChangeKind::add_dimension || kind == ChangeKind::add_characteristic ||
         kind == ChangeKind::add_taxonomy;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_evaluable: return "not-evaluable";
  }
  return "not-evaluable";
}

std::vector<IterationLog> parse_iterations(std::string_view raw) {
  const json doc = json_util::parse(raw);
  ObjectReader r(doc, "");
  const json& iterations = r.required_array("iterations");
  r.finish();

  std::vector<IterationLog> logs;
  for (std::size_t i = 0; i < iterations.size(); ++i) {
    ObjectReader ir(iterations[i], "/iterations/" + std::to_string(i));
    IterationLog log;
    const auto number = ir.required_int("iteration");
    if (number < 1) throw ParseError(ir.child_path("iteration"), "iteration must be a positive integer");
    log.iteration = static_cast<int>(number);
    const std::string approach = ir.required_string("approach");
    if (approach == "empirical-to-conceptual") {
      log.approach = DevelopmentApproach::empirical_to_conceptual;
    } else if (approach == "conceptual-to-empirical") {
      log.approach = DevelopmentApproach::conceptual_to_empirical;
    } else {
      throw ParseError(ir.child_path("approach"), "unknown approach '" + approach + "'");
    }
    log.examined_references = ir.string_array("examined_references", false);
    if (const json* events = ir.optional_array("events")) {
      for (std::size_t e = 0; e < events->size(); ++e) {
        ObjectReader er((*events)[e], ir.child_path("events") + "/" + std::to_string(e));
        const std::string kind = er.required_string("kind");
        auto parsed = parse_change_kind(kind);
        if (!parsed) throw ParseError(er.child_path("kind"), "unknown change kind '" + kind + "'");
        log.events.push_back({*parsed, text::normalize_label(er.required_string("taxonomy")),
                              er.optional_string("details").value_or("")});
        er.finish();
      }
    }
    ir.finish();
    logs.push_back(std::move(log));
  }

  std::sort(logs.begin(), logs.end(), [](const auto& a, const auto& b) { return a.iteration < b.iteration; });
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (logs[i].iteration != static_cast<int>(i + 1)) {
      throw ParseError("/iterations", "iteration numbers must be unique and contiguous from 1; expected " +
                                          std::to_string(i + 1) + ", found " + std::to_string(logs[i].iteration));
    }
  }
  return logs;
}

CorpusManifest parse_manifest(std::string_view raw) {
  const json doc = json_util::parse(raw);
  ObjectReader r(doc, "");
  CorpusManifest manifest;
  manifest.candidate_references = r.string_array("candidate_references", true);
  for (auto& key : manifest.candidate_references) key = text::normalize_label(key);
  r.finish();
  return manifest;
}

bool ValidationReport::ok() const {
  const auto all = all_findings();
  return std::none_of(all.begin(), all.end(), [](const Finding& f) { return f.severity == Severity::error; });
}

std::vector<Finding> ValidationReport::all_findings() const {
  std::vector<Finding> out;
  for (const auto* section : {&schema_violations, &object_violations, &link_errors, &conflicts, &lints}) {
    out.insert(out.end(), section->begin(), section->end());
  }
  return out;
}

std::vector<Finding> check_record(const TaxonomySchema& schema, const ExtractionRecord& record) {
  std::vector<Finding> out;
  for (const auto& o : record.objects) {
    const TaxonomyDef* taxonomy = schema.find(o.taxonomy);
    if (taxonomy == nullptr) continue;
    const std::string subject = record.reference.key + "#" + o.id;
    for (const auto& d : expand_clusters(*taxonomy)) {
      if (d.required && !o.values.contains(d.name)) {
        out.push_back({"missing-value", Severity::error, subject + "." + d.name,
                       "object has no value for dimension '" + d.name + "'"});
      }
    }
    for (const auto& note : taxonomy->scope_notes) {
      if (!note.required) continue;
      const std::string* text = o.note(note.name);
      if (text == nullptr || text::normalize_label(*text).empty()) {
        out.push_back({"missing-scope-note", Severity::error, subject + "." + note.name,
                       "required scope note '" + note.name + "' is missing or empty"});
      }
    }
  }
  return out;
}

namespace {

std::vector<Finding> object_findings(const TaxonomySchema& schema,
                                     const std::map<std::string, ExtractionRecord>& records) {
  std::vector<Finding> out;
  for (const auto& [_, record] : records) {
    auto found = check_record(schema, record);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

}  // namespace

ValidationReport validate_corpus(const OntologySnapshot& snapshot) {
  ValidationReport report;
  report.schema_violations = validate_schema(snapshot.schema());
  report.object_violations = object_findings(snapshot.schema(), snapshot.records());
  std::sort(report.object_violations.begin(), report.object_violations.end());
  report.conflicts = snapshot.warnings();
  report.lints = lint(snapshot);
  return report;
}

CorpusCheck check_corpus(const TaxonomySchema& schema, std::vector<ExtractionRecord> records,
                         std::vector<Finding> upstream) {
  CorpusCheck result;
  auto& report = result.report;
  report.schema_violations = validate_schema(schema);
  report.object_violations = std::move(upstream);
  for (const auto& record : records) {
    auto found = check_record(schema, record);
    report.object_violations.insert(report.object_violations.end(), found.begin(), found.end());
  }
  std::sort(report.object_violations.begin(), report.object_violations.end());
  report.object_violations.erase(std::unique(report.object_violations.begin(), report.object_violations.end()),
                                 report.object_violations.end());

  try {
    result.snapshot = build_snapshot(schema, std::move(records));
  } catch (const DuplicateReference& e) {
    for (const auto& key : e.keys()) {
      report.link_errors.push_back({"duplicate-reference", Severity::error, key,
                                    "reference key '" + key + "' is used by more than one extraction"});
    }
  } catch (const LinkError& e) {
    report.link_errors = e.findings();
  }
  if (result.snapshot) {
    report.conflicts = result.snapshot->warnings();
    report.lints = lint(*result.snapshot);
  }
  return result;
}

std::vector<std::string> uncovered_characteristics(const OntologySnapshot& snapshot) {
  std::set<std::tuple<std::string, std::string, std::string>> used;
  for (const auto& [_, record] : snapshot.records()) {
    for (const auto& o : record.objects) {
      for (const auto& [dimension, value] : o.values) used.emplace(o.taxonomy, dimension, value);
    }
  }
  std::vector<std::string> out;
  std::set<std::string> reported;
  for (const auto& t : snapshot.schema().taxonomies) {
    for (const auto& d : expand_clusters(t)) {
      for (const auto& c : d.characteristics) {
        if (used.contains({t.name, d.name, c})) continue;
        std::string label = t.name + "." + d.name + ":" + c;
        if (reported.insert(label).second) out.push_back(std::move(label));
      }
    }
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::vector<std::string> last_iteration_events(const IterationLog& last, bool (*pick)(ChangeKind)) {
  std::vector<std::string> out;
  for (const auto& e : last.events) {
    if (!pick(e.kind)) continue;
    std::string item = to_string(e.kind) + " (" + e.taxonomy + ")";
    if (!e.details.empty()) item += ": " + e.details;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

EndingConditions check_ending_conditions(const OntologySnapshot& snapshot, const std::vector<IterationLog>& logs,
                                         const std::optional<CorpusManifest>& manifest) {
  EndingConditions out;

  if (!manifest || manifest->candidate_references.empty()) {
    out["EC1"] = {Verdict::not_evaluable, "no candidate references declared in a manifest"};
  } else {
    std::set<std::string> examined;
    for (const auto& log : logs) examined.insert(log.examined_references.begin(), log.examined_references.end());
    std::set<std::string> candidates(manifest->candidate_references.begin(), manifest->candidate_references.end());
    std::vector<std::string> missing;
    for (const auto& key : candidates) {
      if (!examined.contains(key)) missing.push_back(key);
    }
    if (missing.empty()) {
      out["EC1"] = {Verdict::pass, std::to_string(candidates.size()) + " of " + std::to_string(candidates.size()) +
                                       " candidate references examined"};
    } else {
      out["EC1"] = {Verdict::fail, "not examined: " + join(missing)};
    }
  }

  if (logs.empty()) {
    out["EC2"] = {Verdict::not_evaluable, "no iteration log"};
    out["EC4"] = {Verdict::not_evaluable, "no iteration log"};
  } else {
    const IterationLog& last = *std::max_element(
        logs.begin(), logs.end(), [](const auto& a, const auto& b) { return a.iteration < b.iteration; });
    const std::string where = "iteration " + std::to_string(last.iteration);
    if (auto events = last_iteration_events(last, is_merge_or_split); events.empty()) {
      out["EC2"] = {Verdict::pass, where + " has no merge or split events"};
    } else {
      out["EC2"] = {Verdict::fail, where + ": " + join(events, "; ")};
    }
    if (auto events = last_iteration_events(last, is_addition); events.empty()) {
      out["EC4"] = {Verdict::pass, where + " added no dimension, characteristic or taxonomy"};
    } else {
      out["EC4"] = {Verdict::fail, where + ": " + join(events, "; ")};
    }
  }

  if (auto uncovered = uncovered_characteristics(snapshot); uncovered.empty()) {
    std::size_t total = 0;
    for (const auto& t : snapshot.schema().taxonomies) {
      for (const auto& d : expand_clusters(t)) total += d.characteristics.size();
    }
    out["EC3"] = {Verdict::pass, "all " + std::to_string(total) + " characteristics are taken by at least one object"};
  } else {
    out["EC3"] = {Verdict::fail, join(uncovered)};
  }

  std::vector<std::string> duplicates;
  for (const auto& f : validate_schema(snapshot.schema())) {
    if (is_uniqueness_violation(f)) duplicates.push_back(f.subject);
  }
  if (duplicates.empty()) {
    out["EC5"] = {Verdict::pass, "all dimensions and characteristics are unique"};
  } else {
    out["EC5"] = {Verdict::fail, "not unique: " + join(duplicates)};
  }
  return out;
}

std::vector<Finding> lint(const OntologySnapshot& snapshot) {
  std::vector<Finding> out;
  for (const auto& t : snapshot.schema().taxonomies) {
    const std::size_t count = t.dimensions.size() + t.dimension_clusters.size();
    if (count < kConciseMin || count > kConciseMax) {
      out.push_back({"CONCISENESS", Severity::warning, t.name,
                     "taxonomy '" + t.name + "' has " + std::to_string(count) +
                         " dimensions (clusters counted once), outside 7 +/- 2"});
    }
  }

  // Objects identical on every dimension, distinguishable only by scope notes.
  std::map<std::pair<std::string, std::map<std::string, std::string>>, std::vector<std::string>> cells;
  std::map<std::pair<std::string, std::map<std::string, std::string>>, std::set<std::map<std::string, std::string>>>
      cell_notes;
  for (const auto& [key, node] : snapshot.factors()) {
    if (node.implicit) continue;
    std::map<std::string, std::string> values;
    bool conflicted = false;
    for (const auto& [dimension, merged] : node.merged_values) {
      if (merged.conflict()) conflicted = true;
      else values[dimension] = *merged.value;
    }
    if (conflicted) continue;
    auto cell = std::make_pair(std::string(vocab::kFactor), values);
    cells[cell].push_back("factor:" + key);
    cell_notes[cell].insert(std::map<std::string, std::string>{{std::string(vocab::kNameNote), key}});
  }
  for (const auto& [ref_key, record] : snapshot.records()) {
    for (const auto& o : record.objects) {
      if (o.taxonomy == vocab::kFactor) continue;
      auto cell = std::make_pair(o.taxonomy, o.values);
      cells[cell].push_back(ref_key + "#" + o.id);
      cell_notes[cell].insert(o.notes);
    }
  }
  for (const auto& [cell, members] : cells) {
    if (members.size() < 2 || cell_notes[cell].size() < 2) continue;
    out.push_back({"UNIQUE-CELL", Severity::info, cell.first,
                   std::to_string(members.size()) + " " + cell.first +
                       " objects share every characteristic and differ only in scope notes: " + join(members)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubjectiveCondition> subjective_conditions() {
  return {
      {"concise", "automated as the CONCISENESS lint (7 +/- 2 dimensions per taxonomy)"},
      {"robust", "requires human assessment: do dimensions and characteristics differentiate the objects?"},
      {"comprehensive", "requires human assessment: can every object of the domain be classified?"},
      {"extendable", "requires human assessment: can dimensions and characteristics be added easily?"},
      {"explanatory", "requires human assessment: do dimensions and characteristics explain the objects?"},
  };
}

json to_json(const EndingConditions& conditions) {
  json out = json::object();
  for (const auto& [id, result] : conditions) {
    out[id] = {{"verdict", to_string(result.verdict)}, {"evidence", result.evidence}};
  }
  return out;
}

json to_json(const ValidationReport& report) {
  json subjective = json::array();
  for (const auto& s : subjective_conditions()) subjective.push_back({{"name", s.name}, {"status", s.status}});
  json out = {{"ok", report.ok()},
              {"schema_violations", to_json(report.schema_violations)},
              {"object_violations", to_json(report.object_violations)},
              {"link_errors", to_json(report.link_errors)},
              {"conflicts", to_json(report.conflicts)},
              {"lints", to_json(report.lints)},
              {"subjective_conditions", std::move(subjective)}};
  if (report.ending_conditions) out["ending_conditions"] = to_json(*report.ending_conditions);
  return out;
}

namespace {

void render_section(std::ostringstream& os, std::string_view title, const std::vector<Finding>& findings) {
  os << title << " (" << findings.size() << ")\n";
  for (const auto& f : findings) {
    os << "  [" << to_string(f.severity) << "] " << f.code << " " << f.subject << ": " << f.message << "\n";
  }
}

}  // namespace

std::string to_text(const EndingConditions& conditions) {
  std::ostringstream os;
  for (const auto& [id, result] : conditions) {
    os << id << " " << to_string(result.verdict) << ": " << result.evidence << "\n";
  }
  return os.str();
}

std::string to_text(const ValidationReport& report) {
  std::ostringstream os;
  render_section(os, "schema violations", report.schema_violations);
  render_section(os, "object violations", report.object_violations);
  render_section(os, "link errors", report.link_errors);
  render_section(os, "conflicts", report.conflicts);
  render_section(os, "lints", report.lints);
  if (report.ending_conditions) {
    os << "ending conditions\n";
    std::istringstream lines(to_text(*report.ending_conditions));
    for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  }
  os << "subjective conditions\n";
  for (const auto& s : subjective_conditions()) os << "  " << s.name << ": " << s.status << "\n";
  os << (report.ok() ? "result: ok\n" : "result: violations found\n");
  return os.str();
}

}  // namespace reqont
