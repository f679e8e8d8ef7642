#pragma once

// Synthetic data shared by the unit and acceptance tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitext/embedding.hpp"
#include "bitext/error.hpp"
#include "bitext/language.hpp"
#include "bitext/rng.hpp"

namespace bitext::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "bitext");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Code of the bitext::Error thrown by `fn`, empty when nothing is thrown.
template <typename F>
std::optional<ErrorCode> code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

std::vector<float> random_unit(Rng& rng, std::size_t dim);

/// Deterministic stand-in for a sentence encoder. The text (or `key` when
/// given) is hashed with FNV-1a 64, the hash seeds mt19937_64 through
/// splitmix64, and dim Box-Muller normals are drawn and normalized.
std::vector<float> fake_embedding(std::string_view text, std::size_t dim, std::uint64_t seed = 0);

/// normalize(v + scale * u) for a random unit u.
std::vector<float> perturb(std::span<const float> v, double scale, Rng& rng);

EmbeddingMatrix matrix_from_rows(const std::vector<std::vector<float>>& rows, std::string_view id_prefix = "v");

struct ClusteredData {
  EmbeddingMatrix base;
  EmbeddingMatrix queries;
};

/// `n` unit vectors around `clusters` random centers, plus `n_queries`
/// noisy copies of random base rows.
ClusteredData clustered_dataset(std::size_t n, std::size_t dim, std::size_t clusters, std::size_t n_queries,
                                double spread, double query_noise, std::uint64_t seed);

/// Vectors whose every m-subspace takes one of 256 fixed values, so a
/// product quantizer with 256 centroids can represent them exactly. All 256
/// values of every subspace occur when n >= 256.
EmbeddingMatrix palette_corpus(std::size_t n, std::size_t dim, std::size_t m, std::uint64_t seed);

/// Words of the built-in language-id seed text for `lang`, punctuation
/// stripped, at least three characters long.
std::vector<std::string> vocabulary(const LanguageCode& lang);

/// `words` random vocabulary words, capitalized for Latin, ending with the
/// language's full stop.
std::string random_sentence(const std::vector<std::string>& vocab, std::size_t words, const LanguageCode& lang,
                            Rng& rng);

struct PlantedOptions {
  std::size_t planted = 5000;
  std::size_t distractors_per_side = 22500;
  std::size_t dim = 768;
  std::size_t topics = 64;
  double topic_weight = 0.5;
  double pair_noise = 0.25;
  std::size_t sentences_per_doc = 10;
  std::uint64_t seed = 7;
};

/// A ready-to-run monolingual en-hi mining configuration.
struct PlantedRun {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  /// (en sent_id, hi sent_id) of every planted pair.
  std::set<std::pair<std::string, std::string>> planted;
  std::set<std::string> distractor_ids;
  EmbeddingMatrix en;
  EmbeddingMatrix hi;
};

/// Writes documents, SEMB files and config.json under `dir`.
PlantedRun build_planted_run(const std::filesystem::path& dir, const PlantedOptions& options = {});

/// Brute-force Spearman: Pearson correlation of average ranks, O(n^2) ranking.
double brute_force_spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace bitext::testing
