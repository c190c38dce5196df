#pragma once

#include "reqont/error.hpp"
#include "reqont/query.hpp"
#include "reqont/repository.hpp"

#include <map>
#include <string>

// Payload builders shared by the CLI (--format json) and the HTTP service,
// so both surfaces answer equivalent queries with identical JSON.
namespace reqont::api {

using Params = std::multimap<std::string, std::string>;

inline constexpr std::size_t kDefaultLimit = 100;
inline constexpr std::size_t kDefaultOffset = 0;

/// Malformed request input (bad boolean, bad number, unknown parameter).
class BadRequest : public Error {
 public:
  BadRequest(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

/// Reads FactorFilter fields from parameters named like the struct members.
/// `aspect` is "<aspect>:<impact>". Booleans are "true" or "false".
FactorFilter parse_filter(const Params& params);

struct Page {
  std::size_t limit = kDefaultLimit;
  std::size_t offset = kDefaultOffset;
};

Page parse_page(const Params& params);

/// Rejects any parameter outside `allowed` (code "unknown_parameter").
void check_params(const Params& params, std::initializer_list<std::string_view> allowed);

struct Listing {
  nlohmann::json items;  // the requested page
  std::size_t total = 0;
};

Listing factors(const OntologySnapshot& snapshot, const FactorFilter& filter, const Page& page);
Listing objects(const OntologySnapshot& snapshot, std::string_view taxonomy, const Page& page);
nlohmann::json stats(const OntologySnapshot& snapshot);
nlohmann::json gaps(const OntologySnapshot& snapshot);
nlohmann::json authors(const OntologySnapshot& snapshot);
nlohmann::json validation(const LoadedRepository& repo);

/// {"code": ..., "message": ...}
nlohmann::json error_body(const std::string& code, const std::string& message);

}  // namespace reqont::api
