#include "bitext/langid.hpp"

#include <cmath>
#include <vector>

#include "bitext/error.hpp"
#include "bitext/resources.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

namespace {

// Lowercased letters and marks; everything else becomes a single space.
std::u32string letters_only(std::string_view text) {
  std::u32string out = U" ";
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = unicode::next(text, pos);
    if (unicode::is_alpha(cp) || unicode::is_mark(cp)) {
      out.push_back(unicode::to_lower(cp));
    } else if (out.back() != U' ') {
      out.push_back(U' ');
    }
  }
  if (out.back() != U' ') out.push_back(U' ');
  return out;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  for (const char32_t cp : s) unicode::append(out, cp);
  return out;
}

}  // namespace

TrigramLanguageDetector::TrigramLanguageDetector(const LanguageSet& languages, const std::filesystem::path& data_dir)
    : languages_(languages) {
  for (const auto& lang : languages.codes()) {
    if (const auto seed = resources::load("langid/" + lang.str() + ".txt", data_dir)) add_profile(lang, *seed);
  }
}

void TrigramLanguageDetector::add_profile(const LanguageCode& lang, std::string_view seed_text) {
  languages_.add(lang);
  profiles_[lang] = build_profile(seed_text);
}

TrigramLanguageDetector::Profile TrigramLanguageDetector::build_profile(std::string_view text) {
  const auto letters = letters_only(text);
  Profile profile;
  for (std::size_t i = 0; i + 3 <= letters.size(); ++i) {
    const std::u32string_view gram(letters.data() + i, 3);
    if (gram[1] == U' ') continue;
    profile[to_utf8(gram)] += 1.0;
  }
  double norm = 0.0;
  for (const auto& [gram, count] : profile) norm += count * count;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& [gram, count] : profile) count /= norm;
  }
  return profile;
}

double TrigramLanguageDetector::cosine(const Profile& a, const Profile& b) {
  const Profile& small = a.size() < b.size() ? a : b;
  const Profile& large = a.size() < b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [gram, w] : small) {
    const auto it = large.find(gram);
    if (it != large.end()) sum += w * it->second;
  }
  return sum;
}

Detection TrigramLanguageDetector::detect(std::string_view text, const LanguageCode& expected) const {
  BITEXT_CHECK(profiles_.contains(expected), DetectorUnavailable,
               "no language profile for '" + expected.str() + "'");

  std::map<unicode::Script, std::size_t> script_counts;
  std::size_t letters = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = unicode::next(text, pos);
    if (!unicode::is_alpha(cp) && !unicode::is_mark(cp)) continue;
    ++letters;
    const auto script = unicode::script_of(cp);
    if (script != unicode::Script::Other) ++script_counts[script];
  }
  static const LanguageCode undetermined{"und"};
  if (script_counts.empty()) return {undetermined, 0.0};

  auto dominant = script_counts.begin();
  for (auto it = script_counts.begin(); it != script_counts.end(); ++it) {
    if (it->second > dominant->second) dominant = it;
  }
  const double share = static_cast<double>(dominant->second) / static_cast<double>(letters);

  std::vector<LanguageCode> candidates;
  for (const auto& lang : languages_.codes()) {
    if (native_script(lang) == dominant->first) candidates.push_back(lang);
  }
  if (candidates.empty()) return {undetermined, share};
  if (candidates.size() == 1) return {candidates.front(), share};

  const auto profile = build_profile(text);
  Detection best{candidates.front(), -1.0};
  for (const auto& lang : candidates) {
    const auto it = profiles_.find(lang);
    if (it == profiles_.end()) continue;
    const double score = cosine(profile, it->second);
    if (score > best.confidence) best = {lang, score};
  }
  BITEXT_CHECK(best.confidence >= 0.0, DetectorUnavailable,
               "no profile for any language written in " + std::string(unicode::script_name(dominant->first)));
  return best;
}

}  // namespace bitext
