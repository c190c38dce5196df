#pragma once

#include "fixtures.hpp"

#include "reqont/service.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace reqont::testing {

struct GoldenCase {
  std::string name;
  std::string method;
  std::string path;
  std::vector<std::pair<std::string, std::string>> params;
};

inline std::vector<GoldenCase> golden_cases() {
  return {
      {"schema", "GET", "/api/v1/schema", {}},
      {"factors", "GET", "/api/v1/factors", {}},
      {"factors_scope_use_case", "GET", "/api/v1/factors", {{"scope", "use case"}}},
      {"factors_scope_word", "GET", "/api/v1/factors", {{"scope", "word"}}},
      {"factors_aspect", "GET", "/api/v1/factors", {{"aspect", "understandability:impacted negatively"}}},
      {"factors_combined", "GET", "/api/v1/factors",
       {{"has_approach", "true"}, {"has_dataset", "true"}, {"evidence", "true"}, {"text_query", "reuse"}}},
      {"factors_unknown_characteristic", "GET", "/api/v1/factors", {{"scope", "chapter"}}},
      {"factors_bad_boolean", "GET", "/api/v1/factors", {{"has_approach", "maybe"}}},
      {"factors_bad_aspect", "GET", "/api/v1/factors", {{"aspect", "understandability"}}},
      {"factors_bad_limit", "GET", "/api/v1/factors", {{"limit", "-1"}}},
      {"factors_unknown_parameter", "GET", "/api/v1/factors", {{"colour", "red"}}},
      {"factor_detail", "GET", "/api/v1/factors/containing-subflows", {}},
      {"factor_detail_unknown", "GET", "/api/v1/factors/unknown-key", {}},
      {"factor_resources", "GET", "/api/v1/factors/containing-subflows/resources", {}},
      {"factor_resources_unknown", "GET", "/api/v1/factors/unknown-key/resources", {}},
      {"descriptions", "GET", "/api/v1/descriptions", {}},
      {"datasets", "GET", "/api/v1/datasets", {}},
      {"approaches", "GET", "/api/v1/approaches", {}},
      {"approaches_offset_past_end", "GET", "/api/v1/approaches", {{"offset", "5"}}},
      {"datasets_unknown_parameter", "GET", "/api/v1/datasets", {{"scope", "word"}}},
      {"stats", "GET", "/api/v1/stats", {}},
      {"gaps", "GET", "/api/v1/gaps", {}},
      {"authors", "GET", "/api/v1/authors", {}},
      {"validation", "GET", "/api/v1/validation", {}},
      {"health", "GET", "/api/v1/health", {}},
      {"unknown_endpoint", "GET", "/api/v1/metrics", {}},
      {"unknown_nested_endpoint", "GET", "/api/v1/factors/containing-subflows/papers", {}},
      {"write_rejected", "POST", "/api/v1/factors", {}},
  };
}

/// Response in golden form; the health timestamp is masked.
inline nlohmann::json golden_form(int status, const std::string& total_count, nlohmann::json body) {
  if (body.is_object() && body.contains("snapshot_loaded_at")) body["snapshot_loaded_at"] = "<timestamp>";
  nlohmann::json out{{"status", status}, {"body", std::move(body)}};
  if (!total_count.empty()) out["x_total_count"] = total_count;
  return out;
}

inline nlohmann::json golden_form(const ApiResponse& response) {
  auto it = response.headers.find("X-Total-Count");
  return golden_form(response.status, it == response.headers.end() ? "" : it->second, response.body);
}

inline fs::path golden_file(const GoldenCase& c) { return kGoldenDir / (c.name + ".json"); }

inline bool update_golden() {
  const char* flag = std::getenv("REQONT_UPDATE_GOLDEN");
  return flag != nullptr && std::string(flag) == "1";
}

/// Compares with the stored golden file, or rewrites it when
/// REQONT_UPDATE_GOLDEN=1. Returns an empty string on match.
inline std::string check_golden(const GoldenCase& c, const nlohmann::json& actual) {
  const fs::path file = golden_file(c);
  if (update_golden()) {
    fs::create_directories(file.parent_path());
    write_file(file, actual.dump(2) + "\n");
    return {};
  }
  if (!fs::exists(file)) return "missing golden file " + file.string();
  const auto expected = nlohmann::json::parse(read_file(file));
  if (expected == actual) return {};
  return c.name + ": expected " + expected.dump() + "\n got " + actual.dump();
}

inline api::Params to_params(const GoldenCase& c) { return api::Params(c.params.begin(), c.params.end()); }

}  // namespace reqont::testing
