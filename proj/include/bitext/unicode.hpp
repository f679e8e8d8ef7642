#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 walking plus the handful of character-class queries the text
// modules need. Character properties come from ICU.

namespace bitext::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes the code point starting at `pos` and advances `pos` past it.
/// Malformed sequences yield U+FFFD and advance by one byte.
char32_t next(std::string_view s, std::size_t& pos);

/// Code point that ends right before `pos` (pos is moved to its first byte).
char32_t prev(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_digit(char32_t cp);
bool is_alpha(char32_t cp);
bool is_punct(char32_t cp);
/// Combining mark (Mn, Mc or Me).
bool is_mark(char32_t cp);
char32_t to_lower(char32_t cp);

enum class Script { Latin, Devanagari, Bengali, Gurmukhi, Gujarati, Oriya, Tamil, Telugu, Kannada, Malayalam, Other };

Script script_of(char32_t cp);
std::string_view script_name(Script s);

/// Trims and collapses every run of whitespace to one ASCII space.
std::string collapse_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

/// Lowercases, removes punctuation and collapses whitespace.
std::string fold_for_overlap(std::string_view s);

/// Number of whitespace-delimited tokens.
std::size_t count_words(std::string_view s);

bool is_valid_utf8(std::string_view s);

}  // namespace bitext::unicode
