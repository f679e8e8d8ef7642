#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/language.hpp"

namespace bitext {

/// Tokens that do not end a sentence when followed by a period.
struct PrefixTable {
  std::set<std::string, std::less<>> always;
  /// Protected only when the next token starts with a digit ("No. 5").
  std::set<std::string, std::less<>> numeric_only;

  /// Moses-style list: one prefix per line, '#' comments, optional
  /// trailing "#NUMERIC_ONLY#" marker.
  static PrefixTable parse(std::string_view content);
};

bool is_terminal_delimiter(char32_t cp);

/// Rule-based sentence splitter for one language.
///
/// A boundary is placed after a run of terminal delimiters (. ? ! … । ॥),
/// plus any closing quotes or brackets, when whitespace follows. A lone
/// period is not a boundary when the token before it is a listed prefix, an
/// initial, an acronym with internal periods, a numbered-list marker at the
/// start of a sentence, or a numeric-only prefix before a number. Dandas
/// split even without a following space. Blank lines are hard boundaries.
class SentenceSegmenter {
 public:
  SentenceSegmenter(LanguageCode lang, PrefixTable prefixes);

  /// Loads "nonbreaking_prefixes/<lang>.txt" (empty table when absent).
  static SentenceSegmenter for_language(const LanguageCode& lang,
                                        const std::filesystem::path& data_dir = {});

  /// Sentences in order, whitespace collapsed; empty input gives no sentences.
  std::vector<std::string> segment(std::string_view text) const;

  /// Joins OCR page texts, gluing a sentence broken across a page boundary.
  std::string merge_pages(std::span<const std::string> pages) const;

  const LanguageCode& language() const noexcept { return lang_; }
  const PrefixTable& prefixes() const noexcept { return prefixes_; }

 private:
  void segment_paragraph(std::string_view para, std::vector<std::string>& out) const;
  bool is_protected(std::string_view para, std::size_t sentence_start, std::size_t run_start,
                    std::size_t run_end) const;
  bool continues_sentence(std::string_view next_page) const;

  LanguageCode lang_;
  PrefixTable prefixes_;
};

/// Segments with the default prefix table for `lang`.
std::vector<std::string> segment_sentences(std::string_view text, const LanguageCode& lang);

std::string merge_page_fragments(std::span<const std::string> pages, const LanguageCode& lang);

}  // namespace bitext
