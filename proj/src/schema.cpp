#include "reqont/schema.hpp"

#include "reqont/error.hpp"
#include "reqont/json_util.hpp"
#include "reqont/text.hpp"

#include <algorithm>
#include <set>

namespace reqont {

using json_util::json;
using json_util::ObjectReader;

bool DimensionDef::allows(std::string_view characteristic) const {
  return std::find(characteristics.begin(), characteristics.end(), characteristic) != characteristics.end();
}

const ScopeNoteDef* TaxonomyDef::find_scope_note(std::string_view note) const {
  auto it = std::find_if(scope_notes.begin(), scope_notes.end(), [&](const auto& s) { return s.name == note; });
  return it == scope_notes.end() ? nullptr : &*it;
}

const RelationDef* TaxonomyDef::find_relation(std::string_view relation) const {
  auto it = std::find_if(relations.begin(), relations.end(), [&](const auto& r) { return r.name == relation; });
  return it == relations.end() ? nullptr : &*it;
}

const TaxonomyDef* TaxonomySchema::find(std::string_view taxonomy) const {
  auto it = std::find_if(taxonomies.begin(), taxonomies.end(), [&](const auto& t) { return t.name == taxonomy; });
  return it == taxonomies.end() ? nullptr : &*it;
}

namespace {

std::string read_name(ObjectReader& r, const std::string& key = "name") {
  std::string name = text::normalize_label(r.required_string(key));
  if (name.empty()) throw ParseError(r.child_path(key), "name must not be empty");
  return name;
}

std::vector<std::string> read_labels(ObjectReader& r, const std::string& key) {
  std::vector<std::string> labels = r.string_array(key, true);
  for (auto& label : labels) label = text::normalize_label(label);
  return labels;
}

std::optional<std::string> read_default(ObjectReader& r) {
  auto value = r.optional_string("default");
  if (value) value = text::normalize_label(*value);
  return value;
}

DimensionDef parse_dimension(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DimensionDef d;
  d.name = read_name(r);
  d.characteristics = read_labels(r, "characteristics");
  if (d.characteristics.size() < 2) {
    throw ParseError(r.child_path("characteristics"),
                     "dimension '" + d.name + "' needs at least 2 characteristics, has " +
                         std::to_string(d.characteristics.size()));
  }
  d.default_value = read_default(r);
  d.required = r.optional_bool("required").value_or(true);
  r.finish();
  return d;
}

ClusterDef parse_cluster(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ClusterDef c;
  c.name = read_name(r);
  c.members = read_labels(r, "members");
  if (c.members.empty()) throw ParseError(r.child_path("members"), "cluster '" + c.name + "' has no members");
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    if (c.members[i].empty()) throw ParseError(r.child_path("members") + "/" + std::to_string(i), "empty member name");
  }
  c.characteristics = read_labels(r, "characteristics");
  if (c.characteristics.size() < 2) {
    throw ParseError(r.child_path("characteristics"),
                     "cluster '" + c.name + "' needs at least 2 characteristics, has " +
                         std::to_string(c.characteristics.size()));
  }
  c.default_value = read_default(r);
  r.finish();
  return c;
}

ScopeNoteDef parse_scope_note(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ScopeNoteDef s;
  s.name = read_name(r);
  s.required = r.optional_bool("required").value_or(false);
  r.finish();
  return s;
}

RelationDef parse_relation(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  RelationDef rel;
  rel.name = read_name(r);
  rel.target_taxonomy = read_name(r, "target");
  const std::int64_t min = r.required_int("min");
  if (min < 0 || min > UINT32_MAX) throw ParseError(r.child_path("min"), "min must be a non-negative integer");
  rel.min_cardinality = static_cast<std::uint32_t>(min);
  const json& max = r.required_value("max");
  if (max.is_string()) {
    if (max.get<std::string>() != "unbounded") {
      throw ParseError(r.child_path("max"), "max must be a positive integer or \"unbounded\"");
    }
  } else if (max.is_number_integer()) {
    const auto value = max.get<std::int64_t>();
    if (value < 1 || value > UINT32_MAX) throw ParseError(r.child_path("max"), "max must be a positive integer");
    rel.max_cardinality = static_cast<std::uint32_t>(value);
  } else {
    throw ParseError(r.child_path("max"), "max must be a positive integer or \"unbounded\"");
  }
  r.finish();
  return rel;
}

template <class T, class Fn>
std::vector<T> parse_list(ObjectReader& r, const std::string& key, Fn&& parse_one) {
  std::vector<T> out;
  const json* arr = r.optional_array(key);
  if (arr == nullptr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(parse_one((*arr)[i], r.child_path(key) + "/" + std::to_string(i)));
  }
  return out;
}

TaxonomyDef parse_taxonomy(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  TaxonomyDef t;
  t.name = read_name(r);
  t.dimensions = parse_list<DimensionDef>(r, "dimensions", parse_dimension);
  t.dimension_clusters = parse_list<ClusterDef>(r, "dimension_clusters", parse_cluster);
  t.scope_notes = parse_list<ScopeNoteDef>(r, "scope_notes", parse_scope_note);
  t.relations = parse_list<RelationDef>(r, "relations", parse_relation);
  r.finish();
  return t;
}

json labels_json(const std::vector<std::string>& labels) { return json(labels); }

}  // namespace

TaxonomySchema parse_structure(std::string_view raw) {
  const json doc = json_util::parse(raw);
  ObjectReader r(doc, "");
  TaxonomySchema schema;
  schema.version = r.required_int("version");
  if (schema.version < 1) throw ParseError("/version", "version must be >= 1");
  const json& taxonomies = r.required_array("taxonomies");
  for (std::size_t i = 0; i < taxonomies.size(); ++i) {
    schema.taxonomies.push_back(parse_taxonomy(taxonomies[i], "/taxonomies/" + std::to_string(i)));
  }
  if (const json* pub = r.optional_object("public_accessibility")) {
    ObjectReader pr(*pub, "/public_accessibility");
    for (const auto& [taxonomy, _] : pub->items()) {
      auto labels = read_labels(pr, taxonomy);
      schema.public_accessibility[text::normalize_label(taxonomy)] = std::move(labels);
    }
    pr.finish();
  }
  r.finish();
  return schema;
}

nlohmann::json structure_to_json(const TaxonomySchema& schema) {
  json taxonomies = json::array();
  for (const auto& t : schema.taxonomies) {
    json dims = json::array();
    for (const auto& d : t.dimensions) {
      json dj = {{"name", d.name}, {"characteristics", labels_json(d.characteristics)}, {"required", d.required}};
      if (d.default_value) dj["default"] = *d.default_value;
      dims.push_back(std::move(dj));
    }
    json clusters = json::array();
    for (const auto& c : t.dimension_clusters) {
      json cj = {{"name", c.name}, {"members", labels_json(c.members)}, {"characteristics", labels_json(c.characteristics)}};
      if (c.default_value) cj["default"] = *c.default_value;
      clusters.push_back(std::move(cj));
    }
    json notes = json::array();
    for (const auto& s : t.scope_notes) notes.push_back({{"name", s.name}, {"required", s.required}});
    json relations = json::array();
    for (const auto& rel : t.relations) {
      json rj = {{"name", rel.name}, {"target", rel.target_taxonomy}, {"min", rel.min_cardinality}};
      rj["max"] = rel.max_cardinality ? json(*rel.max_cardinality) : json("unbounded");
      relations.push_back(std::move(rj));
    }
    taxonomies.push_back({{"name", t.name},
                          {"dimensions", std::move(dims)},
                          {"dimension_clusters", std::move(clusters)},
                          {"scope_notes", std::move(notes)},
                          {"relations", std::move(relations)}});
  }
  json out = {{"version", schema.version}, {"taxonomies", std::move(taxonomies)}};
  if (!schema.public_accessibility.empty()) {
    json pub = json::object();
    for (const auto& [taxonomy, labels] : schema.public_accessibility) pub[taxonomy] = labels_json(labels);
    out["public_accessibility"] = std::move(pub);
  }
  return out;
}

std::string serialize_structure(const TaxonomySchema& schema) {
  return json_util::canonical_dump(structure_to_json(schema));
}

std::vector<DimensionDef> expand_clusters(const TaxonomyDef& taxonomy) {
  std::vector<DimensionDef> out = taxonomy.dimensions;
  for (const auto& cluster : taxonomy.dimension_clusters) {
    for (const auto& member : cluster.members) {
      DimensionDef d;
      d.name = cluster.name + kClusterSeparator + member;
      d.characteristics = cluster.characteristics;
      d.default_value = cluster.default_value;
      d.required = true;
      out.push_back(std::move(d));
    }
  }
  return out;
}

namespace {

void check_characteristics(const std::string& subject, const std::vector<std::string>& characteristics,
                           const std::optional<std::string>& default_value, std::vector<Finding>& out) {
  std::set<std::string> seen;
  std::set<std::string> reported;
  for (const auto& c : characteristics) {
    if (!seen.insert(c).second && reported.insert(c).second) {
      out.push_back({"duplicate-characteristic", Severity::error, subject + ":" + c,
                     "characteristic '" + c + "' appears more than once in '" + subject + "'"});
    }
  }
  if (default_value && !seen.contains(*default_value)) {
    out.push_back({"bad-default", Severity::error, subject,
                   "default '" + *default_value + "' is not a characteristic of '" + subject + "'"});
  }
}

}  // namespace

std::vector<Finding> validate_schema(const TaxonomySchema& schema) {
  std::vector<Finding> out;
  std::set<std::string> taxonomy_names;
  for (const auto& t : schema.taxonomies) {
    if (!taxonomy_names.insert(t.name).second) {
      out.push_back({"duplicate-taxonomy", Severity::error, t.name, "taxonomy '" + t.name + "' declared more than once"});
    }
  }

  for (const auto& t : schema.taxonomies) {
    std::map<std::string, int> dimension_count;
    for (const auto& d : expand_clusters(t)) ++dimension_count[d.name];
    for (const auto& [name, count] : dimension_count) {
      if (count > 1) {
        out.push_back({"duplicate-dimension", Severity::error, t.name + "." + name,
                       "dimension '" + name + "' occurs " + std::to_string(count) + " times in taxonomy '" + t.name + "'"});
      }
    }
    for (const auto& d : t.dimensions) {
      check_characteristics(t.name + "." + d.name, d.characteristics, d.default_value, out);
    }
    for (const auto& c : t.dimension_clusters) {
      check_characteristics(t.name + "." + c.name, c.characteristics, c.default_value, out);
    }

    std::map<std::string, int> note_count;
    for (const auto& s : t.scope_notes) ++note_count[s.name];
    for (const auto& [name, count] : note_count) {
      if (count > 1) {
        out.push_back({"duplicate-scope-note", Severity::error, t.name + "." + name,
                       "scope note '" + name + "' declared more than once in taxonomy '" + t.name + "'"});
      }
    }

    std::map<std::string, int> relation_count;
    for (const auto& rel : t.relations) {
      ++relation_count[rel.name];
      const std::string subject = t.name + "." + rel.name;
      if (!taxonomy_names.contains(rel.target_taxonomy)) {
        out.push_back({"dangling-relation-target", Severity::error, subject,
                       "relation '" + rel.name + "' targets unknown taxonomy '" + rel.target_taxonomy + "'"});
      }
      if (rel.max_cardinality && rel.min_cardinality > *rel.max_cardinality) {
        out.push_back({"bad-cardinality", Severity::error, subject,
                       "relation '" + rel.name + "' has min " + std::to_string(rel.min_cardinality) + " > max " +
                           std::to_string(*rel.max_cardinality)});
      }
    }
    for (const auto& [name, count] : relation_count) {
      if (count > 1) {
        out.push_back({"duplicate-relation", Severity::error, t.name + "." + name,
                       "relation '" + name + "' declared more than once in taxonomy '" + t.name + "'"});
      }
    }
  }

  for (const auto& [taxonomy, _] : schema.public_accessibility) {
    if (!taxonomy_names.contains(taxonomy)) {
      out.push_back({"unknown-taxonomy", Severity::error, "public_accessibility." + taxonomy,
                     "public accessibility override names unknown taxonomy '" + taxonomy + "'"});
    }
  }

  std::sort(out.begin(), out.end());
  return out;
}

bool is_uniqueness_violation(const Finding& f) {
  return f.code == "duplicate-dimension" || f.code == "duplicate-characteristic";
}

}  // namespace reqont
