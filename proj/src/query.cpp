#include "reqont/query.hpp"

#include "reqont/text.hpp"
#include "reqont/vocabulary.hpp"

#include <algorithm>
#include <sstream>

namespace reqont {

using nlohmann::json;

namespace {

const DimensionDef* find_dimension(const std::vector<DimensionDef>& dims, std::string_view name) {
  auto it = std::find_if(dims.begin(), dims.end(), [&](const auto& d) { return d.name == name; });
  return it == dims.end() ? nullptr : &*it;
}

std::vector<DimensionDef> dimensions_of(const TaxonomySchema& schema, std::string_view taxonomy) {
  const TaxonomyDef* t = schema.find(taxonomy);
  return t == nullptr ? std::vector<DimensionDef>{} : expand_clusters(*t);
}

std::string aspect_dimension(const std::string& aspect) {
  return std::string(vocab::kAspectCluster) + kClusterSeparator + aspect;
}

bool has_value(const OntologyObject* o, std::string_view dimension, std::string_view value) {
  if (o == nullptr) return false;
  const std::string* v = o->value(dimension);
  return v != nullptr && *v == value;
}

bool factor_has(const FactorNode& node, const std::string& dimension, const std::string& value) {
  auto it = node.merged_values.find(dimension);
  if (it == node.merged_values.end()) return false;
  if (it->second.value) return *it->second.value == value;
  return std::any_of(it->second.claims.begin(), it->second.claims.end(),
                     [&](const auto& claim) { return claim.second == value; });
}

const std::vector<ObjectRef>& lookup(const std::map<std::string, std::vector<ObjectRef>>& index,
                                     const std::string& key) {
  static const std::vector<ObjectRef> empty;
  auto it = index.find(key);
  return it == index.end() ? empty : it->second;
}

GapEntry factor_entry(const OntologySnapshot& snapshot, const FactorNode& node) {
  GapEntry e{{}, {}, node.normalized_key, node.canonical_name};
  const auto& descriptions = lookup(snapshot.indexes().factor_descriptions, node.normalized_key);
  if (!node.assertions.empty()) {
    e.reference = node.assertions.front().reference;
    e.object_id = node.assertions.front().id;
  } else if (!descriptions.empty()) {
    e.reference = descriptions.front().reference;
    e.object_id = descriptions.front().id;
  }
  return e;
}

std::string label_of(const OntologyObject& o) {
  if (const std::string* name = o.note(vocab::kNameNote)) return *name;
  return o.id;
}

}  // namespace

std::set<std::string> public_accessibility(const TaxonomySchema& schema, std::string_view taxonomy) {
  std::set<std::string> out;
  if (taxonomy == vocab::kDataset) out.insert(vocab::kPublicDatasetAccessibility.begin(), vocab::kPublicDatasetAccessibility.end());
  if (taxonomy == vocab::kApproach) out.insert(vocab::kPublicApproachAccessibility.begin(), vocab::kPublicApproachAccessibility.end());
  if (auto it = schema.public_accessibility.find(std::string(taxonomy)); it != schema.public_accessibility.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

void check_filter(const OntologySnapshot& snapshot, const FactorFilter& filter) {
  const auto factor_dims = dimensions_of(snapshot.schema(), vocab::kFactor);
  if (filter.scope) {
    const DimensionDef* d = find_dimension(factor_dims, vocab::kScope);
    if (d == nullptr || !d->allows(*filter.scope)) throw UnknownCharacteristic("scope", *filter.scope);
  }
  if (filter.aspect) {
    const auto& [aspect, impact] = *filter.aspect;
    const DimensionDef* d = find_dimension(factor_dims, aspect_dimension(aspect));
    if (d == nullptr) throw UnknownCharacteristic("aspect", aspect);
    if (!d->allows(impact)) throw UnknownCharacteristic("aspect", impact);
  }
  if (filter.accessibility) {
    bool known = false;
    for (auto taxonomy : {vocab::kDataset, vocab::kApproach}) {
      const auto dims = dimensions_of(snapshot.schema(), taxonomy);
      const DimensionDef* d = find_dimension(dims, vocab::kAccessibility);
      known = known || (d != nullptr && d->allows(*filter.accessibility));
    }
    if (!known) throw UnknownCharacteristic("accessibility", *filter.accessibility);
  }
}

std::vector<const FactorNode*> query_factors(const OntologySnapshot& snapshot, const FactorFilter& filter) {
  check_filter(snapshot, filter);
  const auto& idx = snapshot.indexes();
  std::vector<const FactorNode*> out;
  for (const auto& [key, node] : snapshot.factors()) {
    const auto& descriptions = lookup(idx.factor_descriptions, key);
    const auto& datasets = lookup(idx.factor_datasets, key);
    const auto& approaches = lookup(idx.factor_approaches, key);

    if (filter.scope && !factor_has(node, std::string(vocab::kScope), *filter.scope)) continue;
    if (filter.aspect && !factor_has(node, aspect_dimension(filter.aspect->first), filter.aspect->second)) continue;
    if (filter.has_approach && approaches.empty() == *filter.has_approach) continue;
    if (filter.has_dataset && datasets.empty() == *filter.has_dataset) continue;
    if (filter.accessibility) {
      const bool any = std::any_of(datasets.begin(), datasets.end(), [&](const auto& r) {
                         return has_value(snapshot.find(r), vocab::kAccessibility, *filter.accessibility);
                       }) ||
                       std::any_of(approaches.begin(), approaches.end(), [&](const auto& r) {
                         return has_value(snapshot.find(r), vocab::kAccessibility, *filter.accessibility);
                       });
      if (!any) continue;
    }
    if (filter.evidence) {
      const bool any = std::any_of(descriptions.begin(), descriptions.end(), [&](const auto& r) {
        return has_value(snapshot.find(r), vocab::kEvidence, vocab::kYes);
      });
      if (any != *filter.evidence) continue;
    }
    if (filter.practitioners) {
      const bool any = std::any_of(descriptions.begin(), descriptions.end(), [&](const auto& r) {
        return has_value(snapshot.find(r), vocab::kPractitioners, vocab::kYes);
      });
      if (any != *filter.practitioners) continue;
    }
    if (filter.text_query) {
      bool hit = text::contains_ignore_case(node.canonical_name, *filter.text_query);
      for (const auto& r : descriptions) {
        if (hit) break;
        if (const std::string* definition = snapshot.find(r)->note(vocab::kDefinitionNote)) {
          hit = text::contains_ignore_case(*definition, *filter.text_query);
        }
      }
      if (!hit) continue;
    }
    out.push_back(&node);
  }
  return out;
}

FactorResources resources_for_factor(const OntologySnapshot& snapshot, std::string_view factor) {
  const FactorNode* node = snapshot.factor(factor);
  if (node == nullptr) {
    if (auto key = snapshot.resolve_factor(factor)) node = snapshot.factor(*key);
  }
  if (node == nullptr) throw UnknownFactor(std::string(factor));

  const auto& idx = snapshot.indexes();
  FactorResources out;
  out.factor = node;
  out.descriptions = lookup(idx.factor_descriptions, node->normalized_key);
  out.datasets = lookup(idx.factor_datasets, node->normalized_key);
  out.approaches = lookup(idx.factor_approaches, node->normalized_key);
  std::set<std::string> references;
  for (const auto* refs : std::initializer_list<const std::vector<ObjectRef>*>{&node->assertions, &out.descriptions, &out.datasets, &out.approaches}) {
    for (const auto& r : *refs) references.insert(r.reference);
  }
  out.references.assign(references.begin(), references.end());
  return out;
}

GapReport gap_report(const OntologySnapshot& snapshot) {
  const auto& idx = snapshot.indexes();
  GapReport gaps;
  for (const auto& [key, node] : snapshot.factors()) {
    if (lookup(idx.factor_approaches, key).empty()) gaps.factors_without_approach.push_back(factor_entry(snapshot, node));
    if (lookup(idx.factor_datasets, key).empty()) gaps.factors_without_dataset.push_back(factor_entry(snapshot, node));
  }
  for (const auto& ref : snapshot.objects_of(vocab::kDescription)) {
    const OntologyObject& o = *snapshot.find(ref);
    std::string factor;
    if (auto it = idx.object_factors.find(ref); it != idx.object_factors.end() && !it->second.empty()) {
      factor = it->second.front();
    }
    const GapEntry entry{ref.reference, ref.id, factor, factor.empty() ? o.id : snapshot.factor(factor)->canonical_name};
    if (has_value(&o, vocab::kEvidence, vocab::kNo) && has_value(&o, vocab::kPractitioners, vocab::kNo)) {
      gaps.descriptions_without_evidence.push_back(entry);
    }
    const std::string* impact = o.note(vocab::kImpactNote);
    if (impact == nullptr || text::normalize_label(*impact).empty()) gaps.descriptions_without_impact.push_back(entry);
  }
  for (auto taxonomy : {vocab::kDataset, vocab::kApproach}) {
    for (const auto& ref : snapshot.objects_of(taxonomy)) {
      const OntologyObject& o = *snapshot.find(ref);
      if (has_value(&o, vocab::kAccessibility, vocab::kNotDisclosed)) {
        gaps.undisclosed_resources.push_back({ref.reference, ref.id, {}, label_of(o)});
      }
    }
  }
  for (auto* list : {&gaps.factors_without_approach, &gaps.factors_without_dataset, &gaps.descriptions_without_evidence,
                     &gaps.descriptions_without_impact, &gaps.undisclosed_resources}) {
    std::sort(list->begin(), list->end());
  }
  return gaps;
}

std::map<std::string, AuthorEntry> author_index(const OntologySnapshot& snapshot) {
  std::map<ObjectRef, std::string> factor_of_object;
  for (const auto& [key, node] : snapshot.factors()) {
    for (const auto& a : node.assertions) factor_of_object[a] = key;
  }
  const auto& idx = snapshot.indexes();
  std::map<std::string, AuthorEntry> out;
  for (const auto& [author, references] : idx.author_references) {
    AuthorEntry& entry = out[author];
    entry.references = references;
    std::set<std::string> factors;
    for (const auto& reference : references) {
      for (const auto& ref : lookup(idx.reference_objects, reference)) {
        const OntologyObject& o = *snapshot.find(ref);
        if (o.taxonomy == vocab::kFactor) {
          factors.insert(factor_of_object.at(ref));
        } else if (o.taxonomy == vocab::kDescription) {
          if (auto it = idx.object_factors.find(ref); it != idx.object_factors.end()) {
            factors.insert(it->second.begin(), it->second.end());
          }
        } else if (o.taxonomy == vocab::kDataset) {
          entry.datasets.push_back(ref);
        } else if (o.taxonomy == vocab::kApproach) {
          entry.approaches.push_back(ref);
        }
      }
    }
    entry.factors.assign(factors.begin(), factors.end());
    std::sort(entry.datasets.begin(), entry.datasets.end());
    std::sort(entry.approaches.begin(), entry.approaches.end());
  }
  return out;
}

SummaryStats summary_stats(const OntologySnapshot& snapshot) {
  const auto& idx = snapshot.indexes();
  SummaryStats s;
  s.n_references = snapshot.records().size();
  for (const auto& [_, record] : snapshot.records()) {
    const bool with_factor = std::any_of(record.objects.begin(), record.objects.end(), [](const auto& o) {
      return o.taxonomy == vocab::kFactor || o.taxonomy == vocab::kDescription;
    });
    if (with_factor) ++s.n_references_with_factor;
  }
  s.n_factors = snapshot.factors().size();
  for (const auto& [key, _] : snapshot.factors()) ++s.description_count_histogram[lookup(idx.factor_descriptions, key).size()];

  const auto descriptions = snapshot.objects_of(vocab::kDescription);
  s.n_descriptions = descriptions.size();
  for (const auto& ref : descriptions) {
    const OntologyObject* o = snapshot.find(ref);
    if (has_value(o, vocab::kEvidence, vocab::kYes) || has_value(o, vocab::kPractitioners, vocab::kYes)) {
      ++s.n_descriptions_with_evidence_or_practitioners;
    }
    const std::string* impact = o->note(vocab::kImpactNote);
    if (impact != nullptr && !text::normalize_label(*impact).empty()) ++s.n_descriptions_with_impact;
  }

  const auto count_public = [&](std::string_view taxonomy, std::size_t& total, std::size_t& open) {
    const auto open_set = public_accessibility(snapshot.schema(), taxonomy);
    for (const auto& ref : snapshot.objects_of(taxonomy)) {
      ++total;
      const std::string* access = snapshot.find(ref)->value(vocab::kAccessibility);
      if (access != nullptr && open_set.contains(*access)) ++open;
    }
  };
  count_public(vocab::kDataset, s.n_datasets, s.n_datasets_public);
  count_public(vocab::kApproach, s.n_approaches, s.n_approaches_public);
  return s;
}

json factor_json(const OntologySnapshot& snapshot, const FactorNode& factor) {
  const auto& idx = snapshot.indexes();
  json values = json::object();
  json conflicts = json::object();
  for (const auto& [dimension, merged] : factor.merged_values) {
    if (merged.value) {
      values[dimension] = *merged.value;
    } else {
      values[dimension] = std::string(kConflictMarker);
      conflicts[dimension] = merged.claims;
    }
  }
  json assertions = json::array();
  for (const auto& a : factor.assertions) assertions.push_back(a.qualified());
  return {{"key", factor.normalized_key},
          {"name", factor.canonical_name},
          {"implicit", factor.implicit},
          {"aliases", factor.aliases},
          {"values", std::move(values)},
          {"conflicts", std::move(conflicts)},
          {"assertions", std::move(assertions)},
          {"n_descriptions", lookup(idx.factor_descriptions, factor.normalized_key).size()},
          {"n_datasets", lookup(idx.factor_datasets, factor.normalized_key).size()},
          {"n_approaches", lookup(idx.factor_approaches, factor.normalized_key).size()}};
}

json object_entry_json(const OntologySnapshot& snapshot, const ObjectRef& ref) {
  json j = object_to_json(*snapshot.find(ref));
  j["reference"] = ref.reference;
  j["qualified_id"] = ref.qualified();
  return j;
}

json to_json(const OntologySnapshot& snapshot, const FactorResources& resources) {
  const auto entries = [&](const std::vector<ObjectRef>& refs) {
    json arr = json::array();
    for (const auto& r : refs) arr.push_back(object_entry_json(snapshot, r));
    return arr;
  };
  json references = json::array();
  for (const auto& key : resources.references) {
    references.push_back(reference_to_json(snapshot.records().at(key).reference));
  }
  return {{"factor", factor_json(snapshot, *resources.factor)},
          {"descriptions", entries(resources.descriptions)},
          {"datasets", entries(resources.datasets)},
          {"approaches", entries(resources.approaches)},
          {"references", std::move(references)}};
}

namespace {

json gap_list(const std::vector<GapEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    json j = {{"reference", e.reference}, {"object_id", e.object_id}, {"label", e.label}};
    if (!e.factor.empty()) j["factor"] = e.factor;
    arr.push_back(std::move(j));
  }
  return arr;
}

json refs_json(const std::vector<ObjectRef>& refs) {
  json arr = json::array();
  for (const auto& r : refs) arr.push_back(r.qualified());
  return arr;
}

}  // namespace

json to_json(const GapReport& gaps) {
  return {{"factors_without_approach", gap_list(gaps.factors_without_approach)},
          {"factors_without_dataset", gap_list(gaps.factors_without_dataset)},
          {"descriptions_without_evidence", gap_list(gaps.descriptions_without_evidence)},
          {"descriptions_without_impact", gap_list(gaps.descriptions_without_impact)},
          {"undisclosed_resources", gap_list(gaps.undisclosed_resources)}};
}

json to_json(const std::map<std::string, AuthorEntry>& authors) {
  json out = json::object();
  for (const auto& [author, entry] : authors) {
    out[author] = {{"references", entry.references},
                   {"factors", entry.factors},
                   {"datasets", refs_json(entry.datasets)},
                   {"approaches", refs_json(entry.approaches)}};
  }
  return out;
}

json to_json(const SummaryStats& s) {
  json histogram = json::object();
  for (const auto& [count, factors] : s.description_count_histogram) histogram[std::to_string(count)] = factors;
  return {{"n_references", s.n_references},
          {"n_references_with_factor", s.n_references_with_factor},
          {"n_factors", s.n_factors},
          {"n_descriptions", s.n_descriptions},
          {"n_datasets", s.n_datasets},
          {"n_approaches", s.n_approaches},
          {"description_count_histogram", std::move(histogram)},
          {"n_datasets_public", s.n_datasets_public},
          {"n_approaches_public", s.n_approaches_public},
          {"n_descriptions_with_evidence_or_practitioners", s.n_descriptions_with_evidence_or_practitioners},
          {"n_descriptions_with_impact", s.n_descriptions_with_impact}};
}

std::string to_text(const SummaryStats& s) {
  std::ostringstream os;
  os << "references:                 " << s.n_references << " (" << s.n_references_with_factor << " with a factor)\n"
     << "factors:                    " << s.n_factors << "\n"
     << "descriptions:               " << s.n_descriptions << " (" << s.n_descriptions_with_evidence_or_practitioners
     << " with evidence or practitioners, " << s.n_descriptions_with_impact << " with impact)\n"
     << "datasets:                   " << s.n_datasets << " (" << s.n_datasets_public << " public)\n"
     << "approaches:                 " << s.n_approaches << " (" << s.n_approaches_public << " public)\n"
     << "descriptions per factor:\n";
  for (const auto& [count, factors] : s.description_count_histogram) {
    os << "  " << count << ": " << factors << " factor(s)\n";
  }
  return os.str();
}

std::string to_text(const GapReport& gaps) {
  std::ostringstream os;
  const auto section = [&](std::string_view title, const std::vector<GapEntry>& entries) {
    os << title << " (" << entries.size() << ")\n";
    for (const auto& e : entries) os << "  " << e.label << "  [" << e.reference << "#" << e.object_id << "]\n";
  };
  section("factors without approach", gaps.factors_without_approach);
  section("factors without dataset", gaps.factors_without_dataset);
  section("descriptions without evidence", gaps.descriptions_without_evidence);
  section("descriptions without impact", gaps.descriptions_without_impact);
  section("undisclosed resources", gaps.undisclosed_resources);
  return os.str();
}

std::string to_text(const std::map<std::string, AuthorEntry>& authors) {
  std::ostringstream os;
  for (const auto& [author, entry] : authors) {
    os << author << "\n  references:";
    for (const auto& r : entry.references) os << " " << r;
    os << "\n  factors:";
    for (const auto& f : entry.factors) os << " " << f;
    os << "\n  datasets:";
    for (const auto& d : entry.datasets) os << " " << d.qualified();
    os << "\n  approaches:";
    for (const auto& a : entry.approaches) os << " " << a.qualified();
    os << "\n";
  }
  return os.str();
}

}  // namespace reqont
