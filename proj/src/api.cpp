#include "reqont/api.hpp"

#include <algorithm>
#include <charconv>

namespace reqont::api {

using nlohmann::json;

namespace {

std::optional<std::string> single(const Params& params, const std::string& key) {
  auto [begin, end] = params.equal_range(key);
  if (begin == end) return std::nullopt;
  if (std::next(begin) != end) throw BadRequest("bad_filter", "parameter '" + key + "' given more than once");
  return begin->second;
}

std::optional<bool> boolean(const Params& params, const std::string& key) {
  auto value = single(params, key);
  if (!value) return std::nullopt;
  if (*value == "true") return true;
  if (*value == "false") return false;
  throw BadRequest("bad_filter", "parameter '" + key + "' must be true or false, got '" + *value + "'");
}

std::size_t number(const Params& params, const std::string& key, std::size_t fallback) {
  auto value = single(params, key);
  if (!value) return fallback;
  std::size_t out = 0;
  const char* first = value->data();
  const char* last = first + value->size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || value->empty()) {
    throw BadRequest("bad_pagination", "parameter '" + key + "' must be a non-negative integer");
  }
  return out;
}

json page_of(json all, const Page& page) {
  json out = json::array();
  for (std::size_t i = page.offset; i < all.size() && out.size() < page.limit; ++i) out.push_back(std::move(all[i]));
  return out;
}

}  // namespace

FactorFilter parse_filter(const Params& params) {
  FactorFilter filter;
  filter.scope = single(params, "scope");
  if (auto aspect = single(params, "aspect")) {
    const auto colon = aspect->find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == aspect->size()) {
      throw BadRequest("bad_filter", "aspect must look like '<aspect>:<impact>'");
    }
    filter.aspect = std::make_pair(aspect->substr(0, colon), aspect->substr(colon + 1));
  }
  filter.text_query = single(params, "text_query");
  filter.has_approach = boolean(params, "has_approach");
  filter.has_dataset = boolean(params, "has_dataset");
  filter.accessibility = single(params, "accessibility");
  filter.evidence = boolean(params, "evidence");
  filter.practitioners = boolean(params, "practitioners");
  return filter;
}

Page parse_page(const Params& params) {
  return {number(params, "limit", kDefaultLimit), number(params, "offset", kDefaultOffset)};
}

void check_params(const Params& params, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw BadRequest("unknown_parameter", "unknown parameter '" + key + "'");
    }
  }
}

Listing factors(const OntologySnapshot& snapshot, const FactorFilter& filter, const Page& page) {
  json all = json::array();
  for (const FactorNode* node : query_factors(snapshot, filter)) all.push_back(factor_json(snapshot, *node));
  const std::size_t total = all.size();
  return {page_of(std::move(all), page), total};
}

Listing objects(const OntologySnapshot& snapshot, std::string_view taxonomy, const Page& page) {
  json all = json::array();
  for (const auto& ref : snapshot.objects_of(taxonomy)) all.push_back(object_entry_json(snapshot, ref));
  const std::size_t total = all.size();
  return {page_of(std::move(all), page), total};
}

json stats(const OntologySnapshot& snapshot) { return to_json(summary_stats(snapshot)); }
json gaps(const OntologySnapshot& snapshot) { return to_json(gap_report(snapshot)); }
json authors(const OntologySnapshot& snapshot) { return to_json(author_index(snapshot)); }

json validation(const LoadedRepository& repo) {
  json out = to_json(repo.report);
  out["quarantined_references"] = repo.quarantined;
  return out;
}

json error_body(const std::string& code, const std::string& message) {
  return {{"code", code}, {"message", message}};
}

}  // namespace reqont::api
