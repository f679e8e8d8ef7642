#include "bitext/language.hpp"

#include <map>

#include "bitext/error.hpp"

namespace bitext {

LanguageCode::LanguageCode(std::string_view tag) : tag_(tag) {
  BITEXT_CHECK(!tag_.empty(), UnknownLanguage, "empty language tag");
  for (const char c : tag_) {
    BITEXT_CHECK(c >= 'a' && c <= 'z', UnknownLanguage,
                 "language tag must be lowercase letters: '" + tag_ + "'");
  }
}

LanguageSet::LanguageSet(std::initializer_list<std::string_view> tags) {
  for (const auto tag : tags) codes_.emplace(tag);
}

LanguageSet::LanguageSet(const std::vector<std::string>& tags) {
  for (const auto& tag : tags) codes_.emplace(tag);
}

LanguageSet LanguageSet::defaults() {
  return {"en", "as", "bn", "gu", "hi", "kn", "ml", "mr", "or", "pa", "ta", "te"};
}

LanguageCode LanguageSet::require(std::string_view tag) const {
  LanguageCode code{tag};
  BITEXT_CHECK(contains(code), UnknownLanguage,
               "language '" + code.str() + "' is not registered for this run");
  return code;
}

unicode::Script native_script(const LanguageCode& code) {
  using unicode::Script;
  static const std::map<std::string, Script, std::less<>> scripts = {
      {"en", Script::Latin},      {"as", Script::Bengali},  {"bn", Script::Bengali},
      {"gu", Script::Gujarati},   {"hi", Script::Devanagari}, {"kn", Script::Kannada},
      {"ml", Script::Malayalam},  {"mr", Script::Devanagari}, {"or", Script::Oriya},
      {"pa", Script::Gurmukhi},   {"ta", Script::Tamil},    {"te", Script::Telugu},
  };
  const auto it = scripts.find(code.str());
  return it == scripts.end() ? Script::Other : it->second;
}

}  // namespace bitext
