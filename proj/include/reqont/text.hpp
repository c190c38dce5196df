#pragma once

#include <string>
#include <string_view>

namespace reqont::text {

/// Unicode NFC of a UTF-8 string.
std::string nfc(std::string_view utf8);

/// NFC followed by removal of surrounding whitespace. Used for every
/// identifier and characteristic label read from a file, so that label
/// equality is a plain byte comparison afterwards.
std::string normalize_label(std::string_view utf8);

/// Full Unicode lowercase (root locale).
std::string to_lower(std::string_view utf8);

/// Factor identity key: NFC, lowercase, whitespace runs collapsed, trimmed,
/// spaces turned into hyphens. "Containing  Subflows " -> "containing-subflows".
/// Throws EmptyName when nothing is left.
std::string normalize_factor_name(std::string_view name);

/// Case-insensitive substring test (both sides lowercased and NFC'd).
bool contains_ignore_case(std::string_view haystack, std::string_view needle);

/// UTF-8 -> code points. Invalid sequences become U+FFFD.
std::u32string to_code_points(std::string_view utf8);

}  // namespace reqont::text
