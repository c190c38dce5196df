#include "reqont/agreement.hpp"

#include "reqont/text.hpp"
#include "reqont/vocabulary.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace reqont {

namespace {

struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

struct Range {
  std::size_t alo, ahi, blo, bhi;
};

// Longest common block of a[alo, ahi) and b[blo, bhi); earliest in a, then b.
// `prev` and `cur` are scratch rows of at least bhi - blo + 1 entries.
Block longest_block(std::u32string_view a, std::u32string_view b, const Range& r, std::uint32_t* prev,
                    std::uint32_t* cur) {
  Block best{r.alo, r.blo, 0};
  const std::size_t width = r.bhi - r.blo;
  std::fill_n(prev, width + 1, 0);
  cur[0] = 0;
  for (std::size_t i = r.alo; i < r.ahi; ++i) {
    const char32_t c = a[i];
    for (std::size_t col = 1; col <= width; ++col) {
      const std::uint32_t run = c == b[r.blo + col - 1] ? prev[col - 1] + 1 : 0;
      cur[col] = run;
      if (run > best.size) best = {i + 1 - run, r.blo + col - run, run};
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

std::size_t matched_characters(std::u32string_view a, std::u32string_view b) {
  thread_local std::vector<std::uint32_t> rows;
  thread_local std::vector<Range> pending;
  if (rows.size() < 2 * (b.size() + 1)) rows.resize(2 * (b.size() + 1));
  pending.clear();
  pending.push_back({0, a.size(), 0, b.size()});
  std::size_t total = 0;
  while (!pending.empty()) {
    const Range r = pending.back();
    pending.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    const Block block = longest_block(a, b, r, rows.data(), rows.data() + b.size() + 1);
    if (block.size == 0) continue;
    total += block.size;
    pending.push_back({r.alo, block.a, r.blo, block.b});
    pending.push_back({block.a + block.size, r.ahi, block.b + block.size, r.bhi});
  }
  return total;
}

double gestalt_ratio(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t k = std::max(matched_characters(a, b), matched_characters(b, a));
  return 2.0 * static_cast<double>(k) / static_cast<double>(a.size() + b.size());
}

double similarity(std::string_view a, std::string_view b) {
  return gestalt_ratio(text::to_code_points(a), text::to_code_points(b));
}

namespace {

std::string normalized_or_raw(const std::string& name) {
  try {
    return text::normalize_factor_name(name);
  } catch (const EmptyName&) {
    return name;
  }
}

}  // namespace

AlignmentKey alignment_key(const OntologyObject& object, const TaxonomySchema& schema) {
  AlignmentKey key{object.taxonomy, {}};
  if (object.taxonomy == vocab::kDescription) {
    std::vector<std::string> factors;
    if (const TaxonomyDef* t = schema.find(object.taxonomy)) {
      for (const auto& [relation, targets] : object.relations) {
        const RelationDef* def = t->find_relation(relation);
        if (def == nullptr || def->target_taxonomy != vocab::kFactor) continue;
        for (const auto& target : targets) factors.push_back(normalized_or_raw(target));
      }
    }
    std::sort(factors.begin(), factors.end());
    for (const auto& f : factors) key.name += (key.name.empty() ? "" : "|") + f;
  } else if (const std::string* name = object.note(vocab::kNameNote); name != nullptr) {
    key.name = normalized_or_raw(*name);
  }
  if (key.name.empty()) {
    const auto colon = object.id.find(':');
    key.name = object.id.substr(colon == std::string::npos ? 0 : colon + 1);
  }
  return key;
}

std::vector<AlignedPair> align_objects(const ExtractionRecord& a, const ExtractionRecord& b,
                                       const TaxonomySchema& schema) {
  if (a.reference.key != b.reference.key) throw ReferenceMismatch(a.reference.key, b.reference.key);

  std::map<AlignmentKey, std::pair<std::vector<const OntologyObject*>, std::vector<const OntologyObject*>>> groups;
  for (const auto& o : a.objects) groups[alignment_key(o, schema)].first.push_back(&o);
  for (const auto& o : b.objects) groups[alignment_key(o, schema)].second.push_back(&o);

  const auto by_id = [](const OntologyObject* x, const OntologyObject* y) { return x->id < y->id; };
  std::vector<AlignedPair> out;
  for (auto& [key, sides] : groups) {
    std::sort(sides.first.begin(), sides.first.end(), by_id);
    std::sort(sides.second.begin(), sides.second.end(), by_id);
    const std::size_t n = std::max(sides.first.size(), sides.second.size());
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({key, i < sides.first.size() ? sides.first[i] : nullptr,
                     i < sides.second.size() ? sides.second[i] : nullptr});
    }
  }
  return out;
}

std::string to_string(AttributeKind kind) { return kind == AttributeKind::dimension ? "dimension" : "scope-note"; }

namespace {

void score_pair(const std::string& reference, const AlignedPair& pair, const TaxonomySchema& schema,
                std::vector<ValueScore>& out) {
  const TaxonomyDef* taxonomy = schema.find(pair.key.taxonomy);
  if (taxonomy == nullptr) return;
  for (const auto& d : expand_clusters(*taxonomy)) {
    double score = 0.0;
    if (pair.a != nullptr && pair.b != nullptr) {
      const std::string* va = pair.a->value(d.name);
      const std::string* vb = pair.b->value(d.name);
      score = (va == nullptr && vb == nullptr) || (va != nullptr && vb != nullptr && *va == *vb) ? 1.0 : 0.0;
    }
    out.push_back({reference, pair.key, d.name, AttributeKind::dimension, score});
  }
  std::set<std::string> notes;
  for (const auto* side : {pair.a, pair.b}) {
    if (side == nullptr) continue;
    for (const auto& [name, _] : side->notes) notes.insert(name);
  }
  for (const auto& name : notes) {
    double score = 0.0;
    if (pair.a != nullptr && pair.b != nullptr) {
      const std::string* ta = pair.a->note(name);
      const std::string* tb = pair.b->note(name);
      score = similarity(ta ? *ta : std::string_view{}, tb ? *tb : std::string_view{});
    }
    out.push_back({reference, pair.key, name, AttributeKind::scope_note, score});
  }
}

double mean_of(const std::vector<const ValueScore*>& scores) {
  if (scores.empty()) return 100.0;
  double sum = 0.0;
  for (const auto* s : scores) sum += s->score;
  return 100.0 * sum / static_cast<double>(scores.size());
}

}  // namespace

AgreementReport agreement_report(const std::vector<ExtractionRecord>& a, const std::vector<ExtractionRecord>& b,
                                 const TaxonomySchema& schema, std::pair<std::string, std::string> extractor_ids) {
  std::map<std::string, const ExtractionRecord*> by_key_a;
  std::map<std::string, const ExtractionRecord*> by_key_b;
  for (const auto& r : a) by_key_a[r.reference.key] = &r;
  for (const auto& r : b) by_key_b[r.reference.key] = &r;

  AgreementReport report;
  report.pair = std::move(extractor_ids);
  for (const auto& [key, record] : by_key_a) {
    if (by_key_b.contains(key)) report.references_compared.push_back(key);
    else report.references_only_in_a.push_back(key);
  }
  for (const auto& [key, record] : by_key_b) {
    if (!by_key_a.contains(key)) report.references_only_in_b.push_back(key);
  }
  if (report.references_compared.empty()) throw EmptyComparison();

  for (const auto& key : report.references_compared) {
    for (const auto& pair : align_objects(*by_key_a[key], *by_key_b[key], schema)) {
      score_pair(key, pair, schema, report.value_scores);
    }
  }
  std::stable_sort(report.value_scores.begin(), report.value_scores.end(), [](const auto& x, const auto& y) {
    return std::tie(x.reference, x.object_key, x.attribute) < std::tie(y.reference, y.object_key, y.attribute);
  });
  report.n_values = report.value_scores.size();
  std::vector<const ValueScore*> all;
  for (const auto& s : report.value_scores) all.push_back(&s);
  report.mean_agreement = mean_of(all);
  return report;
}

std::string format_summary(const AgreementReport& report) {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "n=%zu, agreement=%.2f%%", report.n_values, report.mean_agreement);
  return buffer;
}

namespace {

struct Breakdown {
  std::map<std::string, std::vector<const ValueScore*>> per_reference;
  std::map<std::tuple<std::string, std::string, AttributeKind>, std::vector<const ValueScore*>> per_attribute;
};

Breakdown breakdown(const AgreementReport& report) {
  Breakdown out;
  for (const auto& s : report.value_scores) {
    out.per_reference[s.reference].push_back(&s);
    out.per_attribute[{s.object_key.taxonomy, s.attribute, s.kind}].push_back(&s);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const AgreementReport& report) {
  using nlohmann::json;
  const Breakdown parts = breakdown(report);
  json per_reference = json::array();
  for (const auto& [key, scores] : parts.per_reference) {
    per_reference.push_back({{"reference", key}, {"n_values", scores.size()}, {"mean_agreement", mean_of(scores)}});
  }
  json per_attribute = json::array();
  for (const auto& [id, scores] : parts.per_attribute) {
    const auto& [taxonomy, attribute, kind] = id;
    per_attribute.push_back({{"taxonomy", taxonomy},
                             {"attribute", attribute},
                             {"kind", to_string(kind)},
                             {"n_values", scores.size()},
                             {"mean_agreement", mean_of(scores)}});
  }
  json values = json::array();
  for (const auto& s : report.value_scores) {
    values.push_back({{"reference", s.reference},
                      {"taxonomy", s.object_key.taxonomy},
                      {"object", s.object_key.name},
                      {"attribute", s.attribute},
                      {"kind", to_string(s.kind)},
                      {"score", s.score}});
  }
  return {{"pair", {report.pair.first, report.pair.second}},
          {"n_values", report.n_values},
          {"mean_agreement", report.mean_agreement},
          {"summary", format_summary(report)},
          {"references_compared", report.references_compared},
          {"references_only_in_a", report.references_only_in_a},
          {"references_only_in_b", report.references_only_in_b},
          {"per_reference", std::move(per_reference)},
          {"per_attribute", std::move(per_attribute)},
          {"values", std::move(values)},
          {"notes", {"objects without a counterpart score 0 on every attribute they carry"}}};
}

std::string to_text(const AgreementReport& report) {
  const Breakdown parts = breakdown(report);
  std::ostringstream os;
  char line[256];
  os << "agreement " << report.pair.first << " vs " << report.pair.second << ": " << format_summary(report) << "\n";
  if (!report.references_only_in_a.empty() || !report.references_only_in_b.empty()) {
    os << "not compared: " << report.references_only_in_a.size() << " only in " << report.pair.first << ", "
       << report.references_only_in_b.size() << " only in " << report.pair.second << "\n";
  }
  os << "\nreference                                 values  agreement\n";
  for (const auto& [key, scores] : parts.per_reference) {
    std::snprintf(line, sizeof line, "%-40s %7zu  %8.2f%%\n", key.c_str(), scores.size(), mean_of(scores));
    os << line;
  }
  os << "\nattribute                                 values  agreement\n";
  for (const auto& [id, scores] : parts.per_attribute) {
    const auto& [taxonomy, attribute, kind] = id;
    const std::string label = taxonomy + "." + attribute + (kind == AttributeKind::scope_note ? " (note)" : "");
    std::snprintf(line, sizeof line, "%-40s %7zu  %8.2f%%\n", label.c_str(), scores.size(), mean_of(scores));
    os << line;
  }
  os << "\nnote: objects without a counterpart score 0 on every attribute they carry\n";
  return os.str();
}

}  // namespace reqont
