#pragma once

#include <nlohmann/json.hpp>

#include <compare>
#include <string>
#include <vector>

namespace reqont {

enum class Severity { error, warning, info };

std::string to_string(Severity s);

/// One validation result. `code` is stable (e.g. "duplicate-dimension");
/// `subject` names the offending thing ("factor.scope", "ref#id", ...).
struct Finding {
  std::string code;
  Severity severity = Severity::error;
  std::string subject;
  std::string message;

  auto operator<=>(const Finding&) const = default;
};

nlohmann::json to_json(const Finding& f);
nlohmann::json to_json(const std::vector<Finding>& findings);

}  // namespace reqont
