#include "reqont/corpus.hpp"

#include "reqont/json_util.hpp"
#include "reqont/text.hpp"
#include "reqont/vocabulary.hpp"

#include <algorithm>
#include <set>

namespace reqont {

using json_util::json;
using json_util::ObjectReader;

const std::string* OntologyObject::value(std::string_view dimension) const {
  auto it = values.find(std::string(dimension));
  return it == values.end() ? nullptr : &it->second;
}

const std::string* OntologyObject::note(std::string_view name) const {
  auto it = notes.find(std::string(name));
  return it == notes.end() ? nullptr : &it->second;
}

const OntologyObject* ExtractionRecord::find(std::string_view id) const {
  auto it = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

namespace {

std::string require_text(ObjectReader& r, const std::string& key, const std::string& what) {
  std::string value = text::normalize_label(r.required_string(key));
  if (value.empty()) throw FieldError("invalid-reference", r.child_path(key), what + " must not be empty");
  return value;
}

Reference parse_reference(const json& j) {
  ObjectReader r(j, "/reference");
  Reference ref;
  ref.key = require_text(r, "key", "reference key");
  if (ref.key.find_first_of("#/\\") != std::string::npos) {
    throw FieldError("invalid-reference", r.child_path("key"), "reference key '" + ref.key + "' contains '#', '/' or '\\'");
  }
  ref.title = require_text(r, "title", "title");
  ref.authors = r.string_array("authors", true);
  if (ref.authors.empty()) throw FieldError("invalid-reference", r.child_path("authors"), "at least one author required");
  for (std::size_t i = 0; i < ref.authors.size(); ++i) {
    ref.authors[i] = text::normalize_label(ref.authors[i]);
    if (ref.authors[i].empty()) {
      throw FieldError("invalid-reference", r.child_path("authors") + "/" + std::to_string(i), "empty author name");
    }
  }
  ref.year = r.required_int("year");
  if (ref.year < 1900 || ref.year > 2100) {
    throw FieldError("invalid-reference", r.child_path("year"), "year " + std::to_string(ref.year) + " outside [1900, 2100]");
  }
  ref.venue = text::normalize_label(r.required_string("venue"));
  ref.doi = r.optional_string("doi");
  ref.url = r.optional_string("url");
  r.finish();
  return ref;
}

OntologyObject parse_object(const json& j, const std::string& path, const TaxonomySchema& schema) {
  ObjectReader r(j, path);
  OntologyObject object;
  object.id = text::normalize_label(r.required_string("id"));
  object.taxonomy = text::normalize_label(r.required_string("taxonomy"));

  const TaxonomyDef* taxonomy = schema.find(object.taxonomy);
  if (taxonomy == nullptr) {
    throw FieldError("unknown-taxonomy", r.child_path("taxonomy"), "unknown taxonomy '" + object.taxonomy + "'");
  }
  const std::string prefix = object.taxonomy + ":";
  if (!object.id.starts_with(prefix) || object.id.size() == prefix.size() ||
      object.id.find('#') != std::string::npos) {
    throw FieldError("bad-object-id", r.child_path("id"),
                     "object id '" + object.id + "' must have the form '" + prefix + "<slug>' without '#'");
  }

  const std::vector<DimensionDef> dimensions = expand_clusters(*taxonomy);
  if (const json* values = r.optional_object("values")) {
    for (const auto& [raw_key, raw_value] : values->items()) {
      const std::string value_path = r.child_path("values") + "/" + raw_key;
      const std::string dimension = text::normalize_label(raw_key);
      auto dim = std::find_if(dimensions.begin(), dimensions.end(), [&](const auto& d) { return d.name == dimension; });
      if (dim == dimensions.end()) {
        throw FieldError("unknown-dimension", value_path,
                         "taxonomy '" + object.taxonomy + "' has no dimension '" + dimension + "'");
      }
      const std::string characteristic = text::normalize_label(json_util::expect_string(raw_value, value_path));
      if (!dim->allows(characteristic)) {
        throw FieldError("unknown-characteristic", value_path,
                         "'" + characteristic + "' is not a characteristic of dimension '" + dimension + "'");
      }
      object.values[dimension] = characteristic;
    }
  }
  for (const auto& d : dimensions) {
    if (d.default_value && !object.values.contains(d.name)) object.values[d.name] = *d.default_value;
  }

  if (const json* notes = r.optional_object("notes")) {
    for (const auto& [raw_key, raw_value] : notes->items()) {
      const std::string note_path = r.child_path("notes") + "/" + raw_key;
      const std::string note = text::normalize_label(raw_key);
      if (taxonomy->find_scope_note(note) == nullptr) {
        throw FieldError("unknown-scope-note", note_path, "taxonomy '" + object.taxonomy + "' has no scope note '" + note + "'");
      }
      object.notes[note] = json_util::expect_string(raw_value, note_path);
    }
  }

  if (const json* relations = r.optional_object("relations")) {
    for (const auto& [raw_key, raw_value] : relations->items()) {
      const std::string relation_path = r.child_path("relations") + "/" + raw_key;
      const std::string relation = text::normalize_label(raw_key);
      if (taxonomy->find_relation(relation) == nullptr) {
        throw FieldError("unknown-relation", relation_path, "taxonomy '" + object.taxonomy + "' has no relation '" + relation + "'");
      }
      if (!raw_value.is_array()) throw ParseError(relation_path, "expected array of strings");
      std::vector<std::string> targets;
      for (std::size_t i = 0; i < raw_value.size(); ++i) {
        const std::string target_path = relation_path + "/" + std::to_string(i);
        std::string target = text::normalize_label(json_util::expect_string(raw_value[i], target_path));
        if (target.empty()) throw FieldError("bad-relation-target", target_path, "empty relation target");
        targets.push_back(std::move(target));
      }
      object.relations[relation] = std::move(targets);
    }
  }
  r.finish();
  return object;
}

}  // namespace

ExtractionRecord parse_extraction(std::string_view raw, const TaxonomySchema& schema) {
  const json doc = json_util::parse(raw);
  ObjectReader r(doc, "");
  ExtractionRecord record;
  record.reference = parse_reference(r.required_object("reference"));
  const json& objects = r.required_array("objects");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = "/objects/" + std::to_string(i);
    OntologyObject object = parse_object(objects[i], path, schema);
    if (!ids.insert(object.id).second) {
      throw FieldError("duplicate-object-id", path + "/id", "object id '" + object.id + "' used twice");
    }
    record.objects.push_back(std::move(object));
  }
  r.finish();
  return record;
}

json reference_to_json(const Reference& reference) {
  json j = {{"key", reference.key},
            {"title", reference.title},
            {"authors", reference.authors},
            {"year", reference.year},
            {"venue", reference.venue}};
  if (reference.doi) j["doi"] = *reference.doi;
  if (reference.url) j["url"] = *reference.url;
  return j;
}

json object_to_json(const OntologyObject& object) {
  return {{"id", object.id},
          {"taxonomy", object.taxonomy},
          {"values", json(object.values)},
          {"notes", json(object.notes)},
          {"relations", json(object.relations)}};
}

json extraction_to_json(const ExtractionRecord& record) {
  json objects = json::array();
  for (const auto& o : record.objects) objects.push_back(object_to_json(o));
  return {{"reference", reference_to_json(record.reference)}, {"objects", std::move(objects)}};
}

std::string canonical_serialize(const ExtractionRecord& record) {
  return json_util::canonical_dump(extraction_to_json(record));
}

LinkError::LinkError(std::vector<Finding> findings)
    : Error("link_error",
            [&] {
              std::string msg = std::to_string(findings.size()) + " link error(s)";
              if (!findings.empty()) msg += "; first: " + findings.front().message;
              return msg;
            }()),
      findings_(std::move(findings)) {}

const OntologyObject* OntologySnapshot::find(const ObjectRef& ref) const {
  auto it = records_.find(ref.reference);
  return it == records_.end() ? nullptr : it->second.find(ref.id);
}

const FactorNode* OntologySnapshot::factor(std::string_view key) const {
  auto it = factors_.find(std::string(key));
  return it == factors_.end() ? nullptr : &it->second;
}

std::optional<std::string> OntologySnapshot::resolve_factor(std::string_view name) const {
  std::string key;
  try {
    key = text::normalize_factor_name(name);
  } catch (const EmptyName&) {
    return std::nullopt;
  }
  if (auto it = alias_to_key_.find(key); it != alias_to_key_.end()) key = it->second;
  if (!factors_.contains(key)) return std::nullopt;
  return key;
}

std::vector<ObjectRef> OntologySnapshot::objects_of(std::string_view taxonomy) const {
  std::vector<ObjectRef> out;
  for (const auto& [key, record] : records_) {
    for (const auto& o : record.objects) {
      if (o.taxonomy == taxonomy) out.push_back({key, o.id});
    }
  }
  return out;
}

namespace {

std::string slug_of(const std::string& id) {
  auto pos = id.find(':');
  return pos == std::string::npos ? id : id.substr(pos + 1);
}

std::string safe_factor_key(const std::string& name) {
  try {
    return text::normalize_factor_name(name);
  } catch (const EmptyName&) {
    return {};
  }
}

std::vector<std::string> split_aliases(const std::string& note) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= note.size()) {
    auto end = note.find(vocab::kAliasSeparator, start);
    if (end == std::string::npos) end = note.size();
    if (std::string key = safe_factor_key(note.substr(start, end - start)); !key.empty()) out.push_back(std::move(key));
    start = end + 1;
  }
  return out;
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct NameCandidate {
  std::string name;
  bool exact = false;  // normalized name equals the node key
  auto operator<=>(const NameCandidate&) const = default;
};

// Display form of a factor name: trimmed, whitespace runs collapsed.
std::string display_name(std::string_view raw) {
  std::string out;
  bool space = false;
  for (char c : text::normalize_label(raw)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

// Prefers names that normalize to the node key, then the most used
// spelling, then an all-lowercase spelling, then the smallest.
std::string pick_canonical_name(const std::vector<NameCandidate>& candidates, const std::string& key) {
  std::map<std::string, std::pair<bool, std::size_t>> tally;
  for (const auto& c : candidates) {
    auto& [exact, count] = tally[display_name(c.name)];
    exact = exact || c.exact;
    ++count;
  }
  const std::string* best = nullptr;
  std::tuple<bool, std::size_t, bool> best_rank{};
  for (const auto& [name, info] : tally) {
    const std::tuple<bool, std::size_t, bool> rank{info.first, info.second, text::to_lower(name) == name};
    if (best == nullptr || rank > best_rank) {
      best = &name;
      best_rank = rank;
    }
  }
  return best == nullptr ? key : *best;
}

}  // namespace

OntologySnapshot build_snapshot(const TaxonomySchema& schema, std::vector<ExtractionRecord> records) {
  OntologySnapshot snap;
  snap.schema_ = schema;

  std::vector<std::string> duplicates;
  for (auto& record : records) {
    std::string key = record.reference.key;
    if (!snap.records_.emplace(key, std::move(record)).second) duplicates.push_back(key);
  }
  if (!duplicates.empty()) {
    sort_unique(duplicates);
    throw DuplicateReference(std::move(duplicates));
  }

  std::vector<Finding> findings;
  auto& idx = snap.indexes_;
  const std::string factor_tax(vocab::kFactor);
  const std::string description_tax(vocab::kDescription);

  auto relation_def = [&](const OntologyObject& o, const std::string& relation) -> const RelationDef* {
    const TaxonomyDef* t = schema.find(o.taxonomy);
    return t == nullptr ? nullptr : t->find_relation(relation);
  };

  // Factor objects and their declared aliases.
  struct FactorObject {
    ObjectRef ref;
    std::string name;
    std::string key;
  };
  std::vector<FactorObject> factor_objects;
  std::map<std::string, std::set<std::string>> alias_targets;
  for (const auto& [ref_key, record] : snap.records_) {
    for (const auto& o : record.objects) {
      if (o.taxonomy != factor_tax) continue;
      const std::string* name_note = o.note(vocab::kNameNote);
      std::string name = name_note != nullptr && !text::normalize_label(*name_note).empty() ? *name_note : slug_of(o.id);
      std::string key = safe_factor_key(name);
      if (key.empty()) key = safe_factor_key(slug_of(o.id));
      if (const std::string* aliases = o.note(vocab::kAliasesNote)) {
        for (const auto& alias : split_aliases(*aliases)) {
          if (alias != key) alias_targets[alias].insert(key);
        }
      }
      factor_objects.push_back({{ref_key, o.id}, std::move(name), std::move(key)});
    }
  }
  for (const auto& [alias, targets] : alias_targets) {
    if (targets.size() > 1) {
      std::string list;
      for (const auto& t : targets) list += (list.empty() ? "" : ", ") + t;
      findings.push_back({"ambiguous-alias", Severity::error, "factor:" + alias,
                          "alias '" + alias + "' is claimed by several factors: " + list});
    } else {
      snap.alias_to_key_[alias] = *targets.begin();
    }
  }
  // Collapse alias chains; a cycle is reported and left unresolved.
  for (auto& [alias, target] : snap.alias_to_key_) {
    std::set<std::string> seen{alias};
    std::string current = target;
    bool cyclic = false;
    while (true) {
      auto it = alias_targets.find(current);
      if (it == alias_targets.end() || it->second.size() != 1) break;
      if (!seen.insert(current).second) {
        cyclic = true;
        break;
      }
      current = *it->second.begin();
    }
    if (cyclic) {
      findings.push_back({"ambiguous-alias", Severity::error, "factor:" + alias,
                          "alias '" + alias + "' is part of an alias cycle"});
    }
    target = current;
  }
  auto resolve = [&](const std::string& key) {
    auto it = snap.alias_to_key_.find(key);
    return it == snap.alias_to_key_.end() ? key : it->second;
  };

  std::map<std::string, std::vector<NameCandidate>> names;
  for (const auto& fo : factor_objects) {
    const std::string node_key = resolve(fo.key);
    auto& node = snap.factors_[node_key];
    node.normalized_key = node_key;
    node.assertions.push_back(fo.ref);
    names[node_key].push_back({fo.name, fo.key == node_key});
  }

  // Descriptions may introduce implicit factors.
  for (const auto& [ref_key, record] : snap.records_) {
    for (const auto& o : record.objects) {
      if (o.taxonomy != description_tax) continue;
      for (const auto& [relation, targets] : o.relations) {
        const RelationDef* def = relation_def(o, relation);
        if (def == nullptr || def->target_taxonomy != factor_tax) continue;
        for (const auto& target : targets) {
          const std::string raw_key = safe_factor_key(target);
          if (raw_key.empty()) continue;
          const std::string node_key = resolve(raw_key);
          auto [it, inserted] = snap.factors_.try_emplace(node_key);
          if (inserted) {
            it->second.normalized_key = node_key;
            it->second.implicit = true;
          }
          if (it->second.implicit) names[node_key].push_back({target, raw_key == node_key});
        }
      }
    }
  }

  // Resolve every relation and check cardinalities.
  for (const auto& [ref_key, record] : snap.records_) {
    for (const auto& o : record.objects) {
      const ObjectRef self{ref_key, o.id};
      idx.reference_objects[ref_key].push_back(self);
      const TaxonomyDef* taxonomy = schema.find(o.taxonomy);
      if (taxonomy == nullptr) continue;

      for (const auto& def : taxonomy->relations) {
        auto rel = o.relations.find(def.name);
        const std::size_t count = rel == o.relations.end() ? 0 : rel->second.size();
        if (!def.admits(count)) {
          const std::string max = def.max_cardinality ? std::to_string(*def.max_cardinality) : "unbounded";
          findings.push_back({"cardinality-breach", Severity::error, self.qualified() + "." + def.name,
                              "relation '" + def.name + "' has " + std::to_string(count) + " target(s), expected " +
                                  std::to_string(def.min_cardinality) + ".." + max});
        }
      }

      for (const auto& [relation, targets] : o.relations) {
        const RelationDef* def = taxonomy->find_relation(relation);
        // An undeclared target taxonomy is a schema violation reported by validate_schema.
        if (def == nullptr || schema.find(def->target_taxonomy) == nullptr) continue;
        auto& resolved = idx.resolved_relations[self][relation];
        for (const auto& target : targets) {
          const std::string subject = self.qualified() + "." + relation;
          if (def->target_taxonomy == factor_tax) {
            const std::string key = resolve(safe_factor_key(target));
            if (key.empty() || !snap.factors_.contains(key)) {
              findings.push_back({"dangling-relation", Severity::error, subject,
                                  "no factor named '" + target + "'"});
              continue;
            }
            resolved.push_back(key);
            idx.object_factors[self].push_back(key);
            continue;
          }
          ObjectRef target_ref{ref_key, target};
          if (auto hash = target.find('#'); hash != std::string::npos) {
            target_ref = {target.substr(0, hash), target.substr(hash + 1)};
          }
          const OntologyObject* target_object = snap.find(target_ref);
          if (target_object == nullptr) {
            findings.push_back({"dangling-relation", Severity::error, subject,
                                "target '" + target_ref.qualified() + "' does not exist"});
            continue;
          }
          if (target_object->taxonomy != def->target_taxonomy) {
            findings.push_back({"relation-wrong-taxonomy", Severity::error, subject,
                                "target '" + target_ref.qualified() + "' is a " + target_object->taxonomy +
                                    ", expected " + def->target_taxonomy});
            continue;
          }
          resolved.push_back(target_ref.qualified());
        }
      }
      if (auto it = idx.object_factors.find(self); it != idx.object_factors.end()) sort_unique(it->second);
    }
  }

  for (auto& [key, node] : snap.factors_) {
    idx.factor_descriptions[key];
    idx.factor_datasets[key];
    idx.factor_approaches[key];
  }
  for (const auto& [object, factor_keys] : idx.object_factors) {
    const OntologyObject* o = snap.find(object);
    for (const auto& key : factor_keys) {
      if (o->taxonomy == description_tax) idx.factor_descriptions[key].push_back(object);
      else if (o->taxonomy == vocab::kDataset) idx.factor_datasets[key].push_back(object);
      else if (o->taxonomy == vocab::kApproach) idx.factor_approaches[key].push_back(object);
    }
  }
  // Approaches reach factors through the descriptions they automate.
  for (const auto& [object, relations] : idx.resolved_relations) {
    if (snap.find(object)->taxonomy != vocab::kApproach) continue;
    for (const auto& [relation, targets] : relations) {
      const RelationDef* def = relation_def(*snap.find(object), relation);
      if (def == nullptr || def->target_taxonomy != description_tax) continue;
      for (const auto& target : targets) {
        const auto hash = target.find('#');
        const ObjectRef description{target.substr(0, hash), target.substr(hash + 1)};
        if (auto it = idx.object_factors.find(description); it != idx.object_factors.end()) {
          for (const auto& key : it->second) idx.factor_approaches[key].push_back(object);
        }
      }
    }
  }
  for (auto* index : {&idx.factor_descriptions, &idx.factor_datasets, &idx.factor_approaches, &idx.reference_objects}) {
    for (auto& [_, refs] : *index) sort_unique(refs);
  }

  for (const auto& [ref_key, record] : snap.records_) {
    for (const auto& author : record.reference.authors) idx.author_references[author].push_back(ref_key);
  }
  for (auto& [_, refs] : idx.author_references) sort_unique(refs);

  // A factor needs a description whenever the schema lets descriptions link factors.
  bool descriptions_link_factors = false;
  if (const TaxonomyDef* d = schema.find(description_tax)) {
    descriptions_link_factors = std::any_of(d->relations.begin(), d->relations.end(),
                                            [&](const auto& r) { return r.target_taxonomy == factor_tax; });
  }

  const TaxonomyDef* factor_def = schema.find(factor_tax);
  const std::vector<DimensionDef> factor_dims = factor_def ? expand_clusters(*factor_def) : std::vector<DimensionDef>{};
  for (auto& [key, node] : snap.factors_) {
    sort_unique(node.assertions);
    node.canonical_name = pick_canonical_name(names[key], key);
    for (const auto& [alias, target] : snap.alias_to_key_) {
      if (target == key) node.aliases.push_back(alias);
    }

    if (descriptions_link_factors && idx.factor_descriptions[key].empty()) {
      findings.push_back({"factor-without-description", Severity::error, "factor:" + key,
                          "factor '" + node.canonical_name + "' is not described by any description"});
    }

    for (const auto& dim : factor_dims) {
      MergedValue merged;
      std::set<std::string> distinct;
      for (const auto& assertion : node.assertions) {
        if (const std::string* v = snap.find(assertion)->value(dim.name)) {
          merged.claims[assertion.qualified()] = *v;
          distinct.insert(*v);
        }
      }
      if (distinct.empty()) continue;
      if (distinct.size() == 1) {
        merged.value = *distinct.begin();
        merged.claims.clear();
      } else {
        std::string list;
        for (const auto& [who, v] : merged.claims) list += (list.empty() ? "" : "; ") + who + "=" + v;
        snap.warnings_.push_back({"conflicting-assertion", Severity::warning, "factor:" + key + "." + dim.name,
                                  "references disagree on '" + dim.name + "': " + list});
      }
      node.merged_values.emplace(dim.name, std::move(merged));
    }
  }

  if (!findings.empty()) {
    std::sort(findings.begin(), findings.end());
    throw LinkError(std::move(findings));
  }
  std::sort(snap.warnings_.begin(), snap.warnings_.end());
  return snap;
}

}  // namespace reqont
