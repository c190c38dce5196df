#include "reqont/json_util.hpp"

#include "reqont/error.hpp"
#include "reqont/finding.hpp"

#include <algorithm>

namespace reqont {

std::string to_string(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
  }
  return "error";
}

nlohmann::json to_json(const Finding& f) {
  return {{"code", f.code}, {"severity", to_string(f.severity)}, {"subject", f.subject}, {"message", f.message}};
}

nlohmann::json to_json(const std::vector<Finding>& findings) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : findings) out.push_back(to_json(f));
  return out;
}

DuplicateReference::DuplicateReference(std::vector<std::string> keys)
    : Error("duplicate_reference",
            [&] {
              std::string msg = "duplicate reference key(s):";
              for (const auto& k : keys) msg += " " + k;
              return msg;
            }()),
      keys_(std::move(keys)) {}

UnknownCharacteristic::UnknownCharacteristic(std::string field, std::string value)
    : Error("unknown_characteristic", "unknown characteristic '" + value + "' for filter '" + field + "'"),
      field_(std::move(field)),
      value_(std::move(value)) {}

}  // namespace reqont

namespace reqont::json_util {

namespace {

std::string kind_name(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::boolean: return "boolean";
    case json::value_t::string: return "string";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned: return "integer";
    case json::value_t::number_float: return "number";
    case json::value_t::array: return "array";
    case json::value_t::object: return "object";
    default: return "value";
  }
}

std::string line_column(std::string_view raw, std::size_t byte) {
  byte = std::min(byte, raw.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (raw[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string escape_pointer_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

}  // namespace

json parse(std::string_view raw) {
  try {
    return json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line.." prefix.
    if (auto pos = what.find(": syntax error"); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(line_column(raw, e.byte), what);
  }
}

std::string canonical_dump(const json& value) {
  return value.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

std::string expect_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ParseError(path, "expected string, found " + kind_name(value));
  return value.get<std::string>();
}

ObjectReader::ObjectReader(const json& value, std::string path) : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) {
    throw ParseError(path_.empty() ? "/" : path_, "expected object, found " + kind_name(value_));
  }
}

std::string ObjectReader::child_path(std::string_view key) const {
  return path_ + "/" + escape_pointer_token(key);
}

bool ObjectReader::has(const std::string& key) const { return value_.contains(key); }

const json* ObjectReader::optional_value(const std::string& key) {
  consumed_.insert(key);
  auto it = value_.find(key);
  return it == value_.end() ? nullptr : &*it;
}

const json& ObjectReader::required_value(const std::string& key) {
  const json* v = optional_value(key);
  if (v == nullptr) throw ParseError(path_.empty() ? "/" : path_, "missing required field '" + key + "'");
  return *v;
}

std::string ObjectReader::required_string(const std::string& key) {
  return expect_string(required_value(key), child_path(key));
}

std::optional<std::string> ObjectReader::optional_string(const std::string& key) {
  const json* v = optional_value(key);
  if (v == nullptr) return std::nullopt;
  return expect_string(*v, child_path(key));
}

std::int64_t ObjectReader::required_int(const std::string& key) {
  const json& v = required_value(key);
  if (!v.is_number_integer()) throw ParseError(child_path(key), "expected integer, found " + kind_name(v));
  return v.get<std::int64_t>();
}

std::optional<bool> ObjectReader::optional_bool(const std::string& key) {
  const json* v = optional_value(key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_boolean()) throw ParseError(child_path(key), "expected boolean, found " + kind_name(*v));
  return v->get<bool>();
}

const json& ObjectReader::required_array(const std::string& key) {
  const json& v = required_value(key);
  if (!v.is_array()) throw ParseError(child_path(key), "expected array, found " + kind_name(v));
  return v;
}

const json* ObjectReader::optional_array(const std::string& key) {
  const json* v = optional_value(key);
  if (v != nullptr && !v->is_array()) throw ParseError(child_path(key), "expected array, found " + kind_name(*v));
  return v;
}

const json& ObjectReader::required_object(const std::string& key) {
  const json& v = required_value(key);
  if (!v.is_object()) throw ParseError(child_path(key), "expected object, found " + kind_name(v));
  return v;
}

const json* ObjectReader::optional_object(const std::string& key) {
  const json* v = optional_value(key);
  if (v != nullptr && !v->is_object()) throw ParseError(child_path(key), "expected object, found " + kind_name(*v));
  return v;
}

std::vector<std::string> ObjectReader::string_array(const std::string& key, bool required) {
  const json* arr = required ? &required_array(key) : optional_array(key);
  std::vector<std::string> out;
  if (arr == nullptr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(expect_string((*arr)[i], child_path(key) + "/" + std::to_string(i)));
  }
  return out;
}

void ObjectReader::finish() const {
  for (const auto& [key, _] : value_.items()) {
    if (!consumed_.contains(key)) throw ParseError(child_path(key), "unknown field '" + key + "'");
  }
}

}  // namespace reqont::json_util
