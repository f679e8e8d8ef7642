#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bitext {

struct PairCount {
  std::string pair;  // "en-hi"
  std::uint64_t existing = 0;
  std::uint64_t mined = 0;
};

struct StatsRow {
  std::string pair;
  std::uint64_t existing = 0;
  std::uint64_t mined = 0;
  std::uint64_t total = 0;
  std::optional<double> increase_factor;  // total / existing, absent when existing is 0
};

struct CorpusStats {
  std::vector<StatsRow> rows;  // input order
  StatsRow overall;

  nlohmann::json to_json() const;
  /// Tab-separated table with the language pairs as columns and rows
  /// existing / new / total / increase factor (one decimal, "∞/na" for none).
  std::string render() const;
};

CorpusStats compute_stats(const std::vector<PairCount>& counts);

/// Factor rounded to one decimal ("3.6"), or "∞/na".
std::string format_factor(const std::optional<double>& factor);

/// `pair \t count` lines; '#' starts a comment.
std::map<std::string, std::uint64_t> read_counts_tsv(std::istream& in);
std::map<std::string, std::uint64_t> read_counts_tsv(const std::filesystem::path& path);

/// Number of non-empty lines in a pair TSV.
std::uint64_t count_pairs_file(const std::filesystem::path& path);

}  // namespace bitext
