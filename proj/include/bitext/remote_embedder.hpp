#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "bitext/embedding.hpp"
#include "bitext/ingest.hpp"

namespace bitext {

/// Client for an embedding provider speaking
///   POST /embed  {"texts": [...]}  ->  {"dim": d, "vectors": [[...], ...]}
struct RemoteEmbedderOptions {
  std::string endpoint;  // "http://host:port"
  std::size_t batch_size = 64;
  std::size_t concurrency = 1;
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_multiplier = 2.0;
  std::chrono::seconds timeout{60};
};

struct FetchReport {
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::size_t renormalized = 0;
};

/// One unit vector per sentence, in input order. Empty input makes no
/// request. Transient failures (connection errors, 5xx, 429) are retried with
/// exponential backoff; throws ProviderUnavailable once attempts run out and
/// PartialResponse when the provider returns the wrong number of vectors.
EmbeddingMatrix fetch_remote_embeddings(const std::vector<SentenceRecord>& sentences,
                                        const RemoteEmbedderOptions& options, FetchReport* report = nullptr);

/// Same, over bare texts; the caller supplies one id per text.
EmbeddingMatrix fetch_remote_embeddings(const std::vector<std::string>& texts, const std::vector<std::string>& ids,
                                        const RemoteEmbedderOptions& options, FetchReport* report = nullptr);

}  // namespace bitext
