#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reqont {

/// Base of every domain error. `code()` is a stable machine-readable token
/// (used in JSON error bodies and finding lists); `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Malformed syntax, missing required fields, wrong value kinds or unknown
/// keys. `location` is either "line L, column C" or a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error("parse_error", location.empty() ? message : location + ": " + message),
        location_(std::move(location)),
        message_(message) {}

  const std::string& location() const noexcept { return location_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string location_;
  std::string message_;
};

/// Syntactically valid extraction content that does not fit the schema
/// (unknown taxonomy, dimension, characteristic, scope note or relation).
class FieldError : public Error {
 public:
  FieldError(std::string code, std::string path, const std::string& message)
      : Error(std::move(code), path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptyName : public Error {
 public:
  explicit EmptyName(const std::string& message) : Error("empty_name", message) {}
};

class DuplicateReference : public Error {
 public:
  explicit DuplicateReference(std::vector<std::string> keys);

  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

class UnknownCharacteristic : public Error {
 public:
  UnknownCharacteristic(std::string field, std::string value);

  const std::string& field() const noexcept { return field_; }
  const std::string& value() const noexcept { return value_; }

 private:
  std::string field_;
  std::string value_;
};

class UnknownFactor : public Error {
 public:
  explicit UnknownFactor(const std::string& key)
      : Error("unknown_factor", "unknown factor '" + key + "'") {}
};

class ReferenceMismatch : public Error {
 public:
  ReferenceMismatch(const std::string& a, const std::string& b)
      : Error("reference_mismatch", "cannot align records of '" + a + "' and '" + b + "'") {}
};

class EmptyComparison : public Error {
 public:
  EmptyComparison() : Error("empty_comparison", "the two extraction sets share no reference key") {}
};

/// File system problems (missing structure file, unreadable directory).
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io_error", message) {}
};

}  // namespace reqont
