#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/langid.hpp"
#include "bitext/miner.hpp"
#include "bitext/pairs.hpp"

namespace bitext {

struct FilterConfig {
  std::size_t min_en_words = 4;
  bool langid_enabled = true;
  /// When false an unavailable detector skips the filter with a warning.
  bool langid_hard_fail = false;
  bool dedup_enabled = true;
  std::uint64_t rng_seed = 0;

  void validate() const;  // throws InvalidArgument when min_en_words == 0
};

struct FilterReport {
  std::size_t input = 0;
  std::size_t removed_threshold = 0;
  std::size_t removed_length = 0;
  std::size_t removed_langid = 0;
  std::size_t removed_duplicates = 0;
  std::size_t output = 0;
  std::vector<std::string> filters_applied;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Keeps the first occurrence; a pair is a duplicate only when both sides
/// repeat an earlier pair exactly.
std::vector<CandidatePair> dedup_exact(const std::vector<CandidatePair>& pairs);

/// Drops pairs whose English side has fewer than `min_en_words`
/// whitespace-delimited tokens. Pairs without an English side pass.
std::vector<CandidatePair> filter_min_length(const std::vector<CandidatePair>& pairs, const FilterConfig& config);

/// Drops a pair when either side is detected as a different language.
/// DetectorUnavailable propagates.
std::vector<CandidatePair> filter_langid(const std::vector<CandidatePair>& pairs, const LanguageDetector& detector);

/// Drops pairs scoring below their mode's threshold (pivot pairs pass).
std::vector<CandidatePair> filter_threshold(const std::vector<CandidatePair>& pairs, const ThresholdPolicy& policy);

/// threshold -> length -> langid -> dedup. `detector` may be null, which
/// counts as unavailable when langid is enabled.
std::vector<CandidatePair> apply_filters(const std::vector<CandidatePair>& pairs, const ThresholdPolicy& policy,
                                         const FilterConfig& config, const LanguageDetector* detector,
                                         FilterReport& report);

/// One validation or test set for an En-X pair, stored folded.
struct HeldOutSet {
  std::string name;  // file stem without the side, e.g. "en-hi" or "flores.en-hi"
  LanguageCode indic;
  std::unordered_set<std::string> english;
  std::unordered_set<std::string> indic_side;
};

/// Reads `[<set>.]<pair>.<side>.txt` files (one sentence per line).
std::vector<HeldOutSet> load_heldout(const std::filesystem::path& dir);

struct DecontaminationReport {
  std::size_t input = 0;
  std::size_t removed = 0;
  /// Pairs matched per set; a pair matching two sets counts in both.
  std::map<std::string, std::size_t> removed_by_set;

  nlohmann::json to_json() const;
};

/// Removes a pair when its English side occurs in any held-out set, or its
/// Indic side occurs in a set of the same language pair. Comparison is on
/// lowercased text with punctuation removed and whitespace collapsed.
std::vector<CandidatePair> decontaminate(const std::vector<CandidatePair>& pairs, const std::vector<HeldOutSet>& sets,
                                         DecontaminationReport* report = nullptr);

struct PivotReport {
  std::size_t groups = 0;  // English sentences present in both inputs
  std::size_t only_a = 0;
  std::size_t only_b = 0;

  nlohmann::json to_json() const;
};

/// Joins en-A and en-B pairs on their English sentence (exact match after
/// whitespace collapse) and keeps one random A-B combination per group.
/// The emitted score is the lower of the two constituent scores.
std::vector<CandidatePair> pivot_extract(const std::vector<CandidatePair>& corpus_a,
                                         const std::vector<CandidatePair>& corpus_b, std::uint64_t seed,
                                         PivotReport* report = nullptr);

}  // namespace bitext
