#include "reqont/text.hpp"

#include "reqont/error.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace reqont::text {

namespace {

icu::UnicodeString from_utf8(std::string_view utf8) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString nfc_u(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString out = normalizer->normalize(s, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU normalization failed");
  }
  return out;
}

// Code-point aware whitespace trim; UnicodeString::trim only knows a subset.
icu::UnicodeString trim_u(const icu::UnicodeString& s) {
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin))) {
    begin = s.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return icu::UnicodeString(s, begin, end - begin);
}

}  // namespace

std::string nfc(std::string_view utf8) { return to_utf8(nfc_u(from_utf8(utf8))); }

std::string normalize_label(std::string_view utf8) { return to_utf8(trim_u(nfc_u(from_utf8(utf8)))); }

std::string to_lower(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  s.toLower(icu::Locale::getRoot());
  return to_utf8(s);
}

std::string normalize_factor_name(std::string_view name) {
  icu::UnicodeString s = nfc_u(from_utf8(name));
  s.toLower(icu::Locale::getRoot());
  // Lowercasing can denormalize (e.g. some Greek/Turkish forms).
  s = nfc_u(s);

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    const UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.isEmpty()) out.append(static_cast<UChar>(u'-'));
    pending_space = false;
    out.append(c);
  }
  if (out.isEmpty()) {
    throw EmptyName("factor name is empty after normalization");
  }
  return to_utf8(out);
}

bool contains_ignore_case(std::string_view haystack, std::string_view needle) {
  const std::string h = nfc(to_lower(haystack));
  const std::string n = nfc(to_lower(needle));
  return h.find(n) != std::string::npos;
}

std::u32string to_code_points(std::string_view utf8) {
  const icu::UnicodeString s = from_utf8(utf8);
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    out.push_back(static_cast<char32_t>(s.char32At(i)));
  }
  return out;
}

}  // namespace reqont::text
