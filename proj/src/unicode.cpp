#include "bitext/unicode.hpp"

#include <cctype>

#include <unicode/uchar.h>
#include <unicode/uscript.h>

namespace bitext::unicode {

char32_t next(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + len > s.size()) {
    ++pos;
    return kReplacement;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += len;
  return cp;
}

char32_t prev(std::string_view s, std::size_t& pos) {
  std::size_t start = pos;
  // back up over at most three continuation bytes
  do {
    --start;
  } while (start > 0 && pos - start < 4 &&
           (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80);
  std::size_t probe = start;
  const char32_t cp = next(s, probe);
  if (probe != pos) {
    pos -= 1;
    return kReplacement;
  }
  pos = start;
  return cp;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }
bool is_upper(char32_t cp) { return u_isupper(static_cast<UChar32>(cp)); }
bool is_lower(char32_t cp) { return u_islower(static_cast<UChar32>(cp)); }
bool is_digit(char32_t cp) { return u_isdigit(static_cast<UChar32>(cp)); }
bool is_alpha(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)); }

bool is_punct(char32_t cp) {
  // ASCII symbols ($+<=>^`|~) count as punctuation, as in most text tooling.
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  return u_ispunct(static_cast<UChar32>(cp));
}

bool is_mark(char32_t cp) {
  const auto type = u_charType(static_cast<UChar32>(cp));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK || type == U_ENCLOSING_MARK;
}

char32_t to_lower(char32_t cp) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

Script script_of(char32_t cp) {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode code = uscript_getScript(static_cast<UChar32>(cp), &status);
  if (U_FAILURE(status)) return Script::Other;
  switch (code) {
    case USCRIPT_LATIN: return Script::Latin;
    case USCRIPT_DEVANAGARI: return Script::Devanagari;
    case USCRIPT_BENGALI: return Script::Bengali;
    case USCRIPT_GURMUKHI: return Script::Gurmukhi;
    case USCRIPT_GUJARATI: return Script::Gujarati;
    case USCRIPT_ORIYA: return Script::Oriya;
    case USCRIPT_TAMIL: return Script::Tamil;
    case USCRIPT_TELUGU: return Script::Telugu;
    case USCRIPT_KANNADA: return Script::Kannada;
    case USCRIPT_MALAYALAM: return Script::Malayalam;
    default: return Script::Other;
  }
}

std::string_view script_name(Script s) {
  switch (s) {
    case Script::Latin: return "Latin";
    case Script::Devanagari: return "Devanagari";
    case Script::Bengali: return "Bengali";
    case Script::Gurmukhi: return "Gurmukhi";
    case Script::Gujarati: return "Gujarati";
    case Script::Oriya: return "Oriya";
    case Script::Tamil: return "Tamil";
    case Script::Telugu: return "Telugu";
    case Script::Kannada: return "Kannada";
    case Script::Malayalam: return "Malayalam";
    case Script::Other: return "Other";
  }
  return "Other";
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = next(s, pos);
    if (is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(s.substr(start, pos - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t pos = begin;
    if (!is_space(next(s, pos))) break;
    begin = pos;
  }
  std::size_t end = s.size();
  while (end > begin) {
    std::size_t pos = end;
    if (!is_space(prev(s, pos))) break;
    end = pos;
  }
  return s.substr(begin, end - begin);
}

std::string fold_for_overlap(std::string_view s) {
  std::string folded;
  folded.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t cp = next(s, pos);
    if (is_punct(cp)) continue;
    append(folded, to_lower(cp));
  }
  return collapse_whitespace(folded);
}

std::size_t count_words(std::string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const bool space = is_space(next(s, pos));
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    if (next(s, pos) == kReplacement) {
      // a literal U+FFFD is three bytes long; anything else is a decode error
      if (pos - start != 3) return false;
    }
  }
  return true;
}

}  // namespace bitext::unicode
