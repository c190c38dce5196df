#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reqont::json_util {

using nlohmann::json;

/// Parse UTF-8 text; syntax errors become ParseError("line L, column C").
json parse(std::string_view raw);

/// Sorted keys, two-space indent, raw UTF-8, trailing newline.
std::string canonical_dump(const json& value);

/// Strict reader for one JSON object: every accessor records the key as
/// consumed, and finish() rejects whatever was not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& value, std::string path);

  const std::string& path() const { return path_; }
  std::string child_path(std::string_view key) const;

  bool has(const std::string& key) const;

  std::string required_string(const std::string& key);
  std::optional<std::string> optional_string(const std::string& key);
  std::int64_t required_int(const std::string& key);
  std::optional<bool> optional_bool(const std::string& key);
  const json& required_array(const std::string& key);
  const json* optional_array(const std::string& key);
  const json& required_object(const std::string& key);
  const json* optional_object(const std::string& key);
  const json& required_value(const std::string& key);
  const json* optional_value(const std::string& key);

  std::vector<std::string> string_array(const std::string& key, bool required);

  void finish() const;

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> consumed_;
};

std::string expect_string(const json& value, const std::string& path);

}  // namespace reqont::json_util
