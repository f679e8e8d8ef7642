#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/ivfpq_index.hpp"
#include "bitext/language.hpp"
#include "bitext/miner.hpp"
#include "bitext/pairs.hpp"
#include "bitext/refine.hpp"

namespace bitext {

struct CorpusConfig {
  LanguageCode lang;
  std::filesystem::path documents;   // JSON lines of SourceDocument
  std::filesystem::path embeddings;  // SEMB file, import mode only
};

enum class EmbeddingProvider { import_file, fetch };

struct EmbeddingsConfig {
  EmbeddingProvider provider = EmbeddingProvider::import_file;
  std::string endpoint;
  std::size_t batch_size = 64;
  std::size_t concurrency = 1;
  int max_attempts = 4;
};

struct IndexConfig {
  std::size_t nlist = 0;   // 0: scaled from corpus size
  std::size_t m = 64;
  std::size_t nprobe = 0;  // 0: scaled from nlist
  std::size_t k = 1;
  bool residual = true;
  std::size_t iterations = 20;
  std::size_t max_points_per_centroid = 256;

  IvfPqOptions index_options(std::uint64_t seed) const;
};

struct SampleConfig {
  bool enabled = true;
  std::size_t n_per_band = 100;
  std::size_t batch_size = 30;
};

/// Declarative description of one mining run. Relative paths in the file
/// resolve against the file's directory.
struct RunConfig {
  LanguageSet languages{"en"};
  std::uint64_t seed = 1234;
  std::size_t workers = 0;  // 0 leaves the OpenMP default
  std::filesystem::path out_dir = "run";
  std::filesystem::path data_dir;
  MiningMode mode = MiningMode::monolingual;
  ThresholdPolicy thresholds;
  IndexConfig index;
  FilterConfig filter;
  EmbeddingsConfig embeddings;
  std::vector<CorpusConfig> corpora;
  std::filesystem::path heldout_dir;
  bool pivot = true;
  SampleConfig sample;
  std::filesystem::path existing_counts;

  /// Throws ConfigError on unknown keys, bad values or missing inputs.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  /// Fully resolved form, suitable for the effective-config snapshot.
  nlohmann::json to_json() const;

  /// Checks invariants and that every input path (except embedding files,
  /// which may be produced later) exists. Throws ConfigError.
  void validate() const;

  const CorpusConfig& corpus(const LanguageCode& lang) const;
  /// Non-English languages with a corpus, sorted.
  std::vector<LanguageCode> targets() const;
};

/// Applies `workers` to the OpenMP runtime when nonzero.
void set_worker_count(std::size_t workers);

}  // namespace bitext
