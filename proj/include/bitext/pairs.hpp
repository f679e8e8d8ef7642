#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bitext/language.hpp"

namespace bitext {

enum class MiningMode { comparable, docpair, monolingual, pivot };

std::string_view to_string(MiningMode mode);
MiningMode parse_mining_mode(std::string_view text);  // throws InvalidArgument

/// One aligned sentence pair. The source side is English for mined pairs;
/// pivot pairs carry two Indic sides and the English sentence they share.
struct CandidatePair {
  std::string src_id;
  std::string tgt_id;
  LanguageCode src_lang = english();
  LanguageCode tgt_lang = english();
  std::string src_text;
  std::string tgt_text;
  double las = 0.0;
  std::optional<float> approx_score;  // index estimate, diagnostics only
  MiningMode mode = MiningMode::comparable;
  std::string bucket = "*";
  /// Pivot pairs: the two English-centric pairs they were built from,
  /// each rendered as "src_id>tgt_id|mode|bucket|las".
  std::string via_src;
  std::string via_tgt;
};

/// Canonical output order: (tgt_id, src_id).
void sort_canonical(std::vector<CandidatePair>& pairs);

/// Shortest decimal that round-trips the double.
std::string format_score(double value);

/// `src_id \t tgt_id \t src_text \t tgt_text \t las \t mode \t bucket`, with
/// `via_src \t via_tgt` appended for pivot pairs.
void write_pairs_tsv(std::ostream& out, const std::vector<CandidatePair>& pairs);
void write_pairs_tsv(const std::filesystem::path& path, const std::vector<CandidatePair>& pairs);

/// Languages are not stored per row; the caller names them.
std::vector<CandidatePair> read_pairs_tsv(std::istream& in, const LanguageCode& src_lang,
                                          const LanguageCode& tgt_lang);
std::vector<CandidatePair> read_pairs_tsv(const std::filesystem::path& path, const LanguageCode& src_lang,
                                          const LanguageCode& tgt_lang);

/// "en-hi" style label and its inverse.
std::string pair_label(const LanguageCode& a, const LanguageCode& b);
std::pair<LanguageCode, LanguageCode> parse_pair_label(std::string_view label);

}  // namespace bitext
