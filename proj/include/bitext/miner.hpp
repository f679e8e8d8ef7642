#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/embedding.hpp"
#include "bitext/ingest.hpp"
#include "bitext/ivfpq_index.hpp"
#include "bitext/pairs.hpp"

namespace bitext {

struct ThresholdPolicy {
  double comparable = 0.75;
  double docpair = 0.75;
  double monolingual = 0.80;

  double for_mode(MiningMode mode) const;
  /// Throws InvalidArgument unless every threshold lies in (0, 1).
  void validate() const;
};

/// Sentences of one language with their embeddings, matched by sent_id.
struct MiningCorpus {
  LanguageCode lang;
  std::vector<SentenceRecord> sentences;
  EmbeddingMatrix embeddings;
};

struct MinerOptions {
  ThresholdPolicy thresholds;
  /// Pairs scoring in [threshold - margin, threshold) are kept aside for
  /// annotation sampling.
  double near_margin = 0.1;
  std::size_t nprobe = 0;  // monolingual only; 0 means the index default
  std::size_t k = 1;       // hits re-scored per target
};

struct BucketCounts {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t accepted = 0;
};

struct MiningReport {
  MiningMode mode = MiningMode::comparable;
  double threshold = 0.0;
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t candidates = 0;  // one per target with something to align to
  std::size_t accepted = 0;
  std::size_t below_threshold = 0;
  std::size_t near_threshold = 0;
  std::size_t missing_embeddings = 0;
  std::size_t unpaired_documents = 0;  // docpair: pair keys seen on one side only
  std::size_t targets_without_sources = 0;
  std::map<std::string, BucketCounts> buckets;

  nlohmann::json to_json() const;
};

struct MiningResult {
  std::vector<CandidatePair> pairs;           // accepted, canonical order
  std::vector<CandidatePair> near_threshold;  // rejected but within the margin
  MiningReport report;
};

struct Alignment {
  std::size_t src_row = 0;
  double las = 0.0;
};

/// For every target row, the source row with the highest cosine (exact,
/// exhaustive). Ties go to the lower source id. Empty when `src` is empty.
std::vector<Alignment> align_bucket(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt);

/// Month-bucketed alignment; pairs never cross buckets.
MiningResult mine_comparable(const MiningCorpus& src, const MiningCorpus& tgt, const MinerOptions& options);

/// Alignment restricted to documents sharing a pair key.
MiningResult mine_docpair(const MiningCorpus& src, const MiningCorpus& tgt, const MinerOptions& options);

/// Index retrieval followed by exact re-scoring against the full source
/// embeddings. `index` must hold the source corpus. Throws EmptyIndex.
MiningResult mine_monolingual(const MiningCorpus& src, const IvfPqIndex& index, const MiningCorpus& tgt,
                              const MinerOptions& options);

}  // namespace bitext
