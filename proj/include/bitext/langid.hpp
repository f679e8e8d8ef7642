#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>

#include "bitext/language.hpp"

namespace bitext {

struct Detection {
  LanguageCode lang;
  double confidence = 0.0;
};

/// Pluggable language identification. Implementations may throw
/// DetectorUnavailable when they cannot judge a language.
class LanguageDetector {
 public:
  virtual ~LanguageDetector() = default;
  virtual Detection detect(std::string_view text, const LanguageCode& expected) const = 0;
};

/// Script-first classifier. The dominant script narrows the candidates to
/// the languages written in it; languages that share a script are told
/// apart by cosine similarity of character-trigram profiles built from
/// seed sentences.
class TrigramLanguageDetector final : public LanguageDetector {
 public:
  /// Profiles from `<data_dir>/langid/<lang>.txt`, falling back to the
  /// built-in seed files.
  explicit TrigramLanguageDetector(const LanguageSet& languages, const std::filesystem::path& data_dir = {});

  void add_profile(const LanguageCode& lang, std::string_view seed_text);

  /// Returns "und" when no registered language uses the dominant script.
  /// Throws DetectorUnavailable when the expected language has no profile.
  Detection detect(std::string_view text, const LanguageCode& expected) const override;

 private:
  using Profile = std::unordered_map<std::string, double>;
  static Profile build_profile(std::string_view text);
  static double cosine(const Profile& a, const Profile& b);

  LanguageSet languages_;
  std::map<LanguageCode, Profile> profiles_;
};

}  // namespace bitext
