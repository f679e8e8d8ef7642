#include "bitext/segmenter.hpp"

#include <map>
#include <mutex>

#include "bitext/resources.hpp"

namespace bitext {

namespace {

using unicode::next;

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'”': case U'’': case U'»': case U'›':
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U'(': case U'[': case U'{':
    case U'“': case U'‘': case U'«': case U'‹':
      return true;
    default:
      return false;
  }
}

bool is_danda(char32_t cp) { return cp == U'।' || cp == U'॥'; }

char32_t peek(std::string_view s, std::size_t pos) { return next(s, pos); }

bool all_digits(std::string_view token) {
  if (token.empty()) return false;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (!unicode::is_digit(next(token, pos))) return false;
  }
  return true;
}

// One letter plus combining marks, e.g. "A" or Tamil "மு".
bool is_initial(std::string_view token) {
  std::size_t pos = 0;
  if (token.empty()) return false;
  const char32_t first = next(token, pos);
  if (!unicode::is_alpha(first)) return false;
  while (pos < token.size()) {
    if (!unicode::is_mark(next(token, pos))) return false;
  }
  if (unicode::script_of(first) == unicode::Script::Latin) return unicode::is_upper(first);
  return true;
}

bool is_acronym(std::string_view token) {
  if (token.find('.') == std::string_view::npos) return false;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (unicode::is_alpha(next(token, pos))) return true;
  }
  return false;
}

// Trailing closers stripped, does the text end in a terminal delimiter?
bool ends_with_terminal(std::string_view text) {
  std::size_t pos = text.size();
  while (pos > 0) {
    const char32_t cp = unicode::prev(text, pos);
    if (is_closer(cp)) continue;
    return is_terminal_delimiter(cp);
  }
  return false;
}

}  // namespace

bool is_terminal_delimiter(char32_t cp) {
  return cp == U'.' || cp == U'?' || cp == U'!' || cp == U'…' || is_danda(cp);
}

PrefixTable PrefixTable::parse(std::string_view content) {
  PrefixTable table;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = unicode::trim(content.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    constexpr std::string_view kNumericOnly = "#NUMERIC_ONLY#";
    if (const auto marker = line.find(kNumericOnly); marker != std::string_view::npos) {
      table.numeric_only.emplace(unicode::trim(line.substr(0, marker)));
    } else {
      table.always.emplace(line);
    }
  }
  return table;
}

SentenceSegmenter::SentenceSegmenter(LanguageCode lang, PrefixTable prefixes)
    : lang_(std::move(lang)), prefixes_(std::move(prefixes)) {}

SentenceSegmenter SentenceSegmenter::for_language(const LanguageCode& lang,
                                                  const std::filesystem::path& data_dir) {
  const auto content = resources::load("nonbreaking_prefixes/" + lang.str() + ".txt", data_dir);
  return SentenceSegmenter(lang, content ? PrefixTable::parse(*content) : PrefixTable{});
}

std::vector<std::string> SentenceSegmenter::segment(std::string_view text) const {
  std::vector<std::string> out;
  // blank lines separate paragraphs, and paragraphs never share a sentence
  std::size_t para_start = 0;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    const bool last = line_end == std::string_view::npos;
    if (last) line_end = text.size();
    const auto line = text.substr(line_start, line_end - line_start);
    if (unicode::trim(line).empty() && !last) {
      segment_paragraph(text.substr(para_start, line_start - para_start), out);
      para_start = line_end + 1;
    }
    if (last) break;
    line_start = line_end + 1;
  }
  if (para_start < text.size()) segment_paragraph(text.substr(para_start), out);
  return out;
}

void SentenceSegmenter::segment_paragraph(std::string_view para,
                                          std::vector<std::string>& out) const {
  const auto emit = [&](std::size_t begin, std::size_t end) {
    auto sentence = unicode::collapse_whitespace(para.substr(begin, end - begin));
    if (!sentence.empty()) out.push_back(std::move(sentence));
  };

  std::size_t sentence_start = 0;
  std::size_t pos = 0;
  while (pos < para.size()) {
    const std::size_t run_start = pos;
    const char32_t cp = next(para, pos);
    if (!is_terminal_delimiter(cp)) continue;

    bool has_danda = is_danda(cp);
    std::size_t delimiters = 1;
    while (pos < para.size()) {
      std::size_t probe = pos;
      const char32_t c = next(para, probe);
      if (!is_terminal_delimiter(c)) break;
      has_danda = has_danda || is_danda(c);
      ++delimiters;
      pos = probe;
    }
    const std::size_t run_end = pos;
    while (pos < para.size()) {
      std::size_t probe = pos;
      if (!is_closer(next(para, probe))) break;
      pos = probe;
    }

    const bool at_end = pos >= para.size();
    if (!at_end && !has_danda && !unicode::is_space(peek(para, pos))) continue;
    if (delimiters == 1 && cp == U'.' && is_protected(para, sentence_start, run_start, run_end)) {
      continue;
    }
    emit(sentence_start, pos);
    sentence_start = pos;
  }
  emit(sentence_start, para.size());
}

bool SentenceSegmenter::is_protected(std::string_view para, std::size_t sentence_start,
                                     std::size_t run_start, std::size_t run_end) const {
  // the token ending at the period
  std::size_t token_start = run_start;
  while (token_start > sentence_start) {
    std::size_t probe = token_start;
    if (unicode::is_space(unicode::prev(para, probe))) break;
    token_start = probe;
  }
  std::string_view token = para.substr(token_start, run_start - token_start);
  while (!token.empty()) {
    std::size_t probe = 0;
    if (!is_opener(next(token, probe))) break;
    token.remove_prefix(probe);
  }
  if (token.empty()) return false;

  if (prefixes_.always.contains(token)) return true;
  if (is_initial(token) || is_acronym(token)) return true;

  std::size_t after = run_end;
  while (after < para.size()) {
    std::size_t probe = after;
    if (!unicode::is_space(next(para, probe))) break;
    after = probe;
  }
  const bool next_is_number = after < para.size() && unicode::is_digit(peek(para, after));
  if (next_is_number && prefixes_.numeric_only.contains(token)) return true;

  // "1. Item" at the start of a sentence is a list marker
  if (all_digits(token) && unicode::trim(para.substr(sentence_start, token_start - sentence_start)).empty()) {
    return true;
  }
  return false;
}

bool SentenceSegmenter::continues_sentence(std::string_view next_page) const {
  std::size_t pos = 0;
  const char32_t first = next(next_page, pos);
  unicode::Script script = native_script(lang_);
  if (script == unicode::Script::Other) {
    script = (unicode::is_upper(first) || unicode::is_lower(first)) ? unicode::Script::Latin
                                                                    : unicode::script_of(first);
  }
  if (script != unicode::Script::Latin) return true;
  return !is_opener(first) && !unicode::is_upper(first);
}

std::string SentenceSegmenter::merge_pages(std::span<const std::string> pages) const {
  std::string merged;
  for (const auto& raw : pages) {
    const auto page = unicode::trim(raw);
    if (page.empty()) continue;
    if (merged.empty()) {
      merged.assign(page);
      continue;
    }
    if (ends_with_terminal(merged) || continues_sentence(page)) {
      merged.push_back(' ');
    } else {
      // an unterminated fragment that the next page does not continue
      merged.append("\n\n");
    }
    merged.append(page);
  }
  return merged;
}

namespace {

const SentenceSegmenter& default_segmenter(const LanguageCode& lang) {
  static std::mutex mutex;
  static std::map<LanguageCode, SentenceSegmenter> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(lang);
  if (it == cache.end()) it = cache.emplace(lang, SentenceSegmenter::for_language(lang)).first;
  return it->second;
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text, const LanguageCode& lang) {
  return default_segmenter(lang).segment(text);
}

std::string merge_page_fragments(std::span<const std::string> pages, const LanguageCode& lang) {
  return default_segmenter(lang).merge_pages(pages);
}

}  // namespace bitext
