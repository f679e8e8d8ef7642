#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/unicode.hpp"

namespace bitext {

/// Lowercase language tag such as "en" or "hi".
class LanguageCode {
 public:
  LanguageCode() = default;
  /// Throws UnknownLanguage unless the tag is nonempty lowercase ASCII letters.
  explicit LanguageCode(std::string_view tag);

  const std::string& str() const noexcept { return tag_; }
  bool empty() const noexcept { return tag_.empty(); }

  friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;

 private:
  std::string tag_;
};

inline const LanguageCode& english() {
  static const LanguageCode en{"en"};
  return en;
}

/// The languages registered for a run.
class LanguageSet {
 public:
  LanguageSet() = default;
  LanguageSet(std::initializer_list<std::string_view> tags);
  explicit LanguageSet(const std::vector<std::string>& tags);

  /// English plus the eleven Indic languages.
  static LanguageSet defaults();

  void add(const LanguageCode& code) { codes_.insert(code); }
  bool contains(const LanguageCode& code) const { return codes_.contains(code); }
  /// Parses and checks registration; throws UnknownLanguage.
  LanguageCode require(std::string_view tag) const;

  const std::set<LanguageCode>& codes() const noexcept { return codes_; }

 private:
  std::set<LanguageCode> codes_;
};

/// Native script of a known language, Other when not known.
unicode::Script native_script(const LanguageCode& code);

}  // namespace bitext
