#include "bitext/remote_embedder.hpp"

#include <atomic>
#include <future>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bitext/error.hpp"

namespace bitext {

namespace {

struct Batch {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Counters {
  std::atomic<std::size_t> requests{0};
  std::atomic<std::size_t> retries{0};
};

bool retryable(int status) { return status == 429 || status >= 500; }

// Returns dim and fills `rows` (one vector per text in the batch).
std::size_t post_batch(const RemoteEmbedderOptions& options, const std::vector<std::string>& texts, Batch batch,
                       std::vector<std::vector<float>>& rows, Counters& counters) {
  httplib::Client client(options.endpoint);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);

  nlohmann::json body;
  body["texts"] = nlohmann::json::array();
  for (std::size_t i = batch.begin; i < batch.end; ++i) body["texts"].push_back(texts[i]);
  const std::string payload = body.dump();

  auto backoff = options.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) {
      ++counters.retries;
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(backoff.count() * options.backoff_multiplier));
    }
    ++counters.requests;
    const auto res = client.Post("/embed", payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (retryable(res->status)) continue;
      BITEXT_THROW(ProviderUnavailable, options.endpoint + " rejected batch: " + last_error);
    }

    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      BITEXT_THROW(FormatError, std::string("provider reply is not JSON: ") + e.what());
    }
    BITEXT_CHECK(reply.contains("vectors") && reply["vectors"].is_array(), FormatError,
                 "provider reply lacks a vectors array");
    const auto& vectors = reply["vectors"];
    const std::size_t expected = batch.end - batch.begin;
    BITEXT_CHECK(vectors.size() == expected, PartialResponse,
                 "provider returned " + std::to_string(vectors.size()) + " vectors for " +
                     std::to_string(expected) + " texts");
    std::size_t dim = reply.value("dim", std::size_t{0});
    for (std::size_t i = 0; i < expected; ++i) {
      auto row = vectors[i].get<std::vector<float>>();
      if (dim == 0) dim = row.size();
      BITEXT_CHECK(row.size() == dim, DimensionMismatch,
                   "vector of size " + std::to_string(row.size()) + " in a reply declaring dim " + std::to_string(dim));
      rows[batch.begin + i] = std::move(row);
    }
    return dim;
  }
  BITEXT_THROW(ProviderUnavailable, options.endpoint + " unavailable after " + std::to_string(options.max_attempts) +
                                        " attempts: " + last_error);
}

}  // namespace

EmbeddingMatrix fetch_remote_embeddings(const std::vector<std::string>& texts, const std::vector<std::string>& ids,
                                        const RemoteEmbedderOptions& options, FetchReport* report) {
  BITEXT_CHECK(texts.size() == ids.size(), LengthMismatch, "texts and ids differ in length");
  BITEXT_CHECK(options.batch_size > 0, InvalidArgument, "batch size must be positive");
  BITEXT_CHECK(options.max_attempts > 0, InvalidArgument, "max attempts must be positive");
  if (texts.empty()) return EmbeddingMatrix(0);

  std::vector<Batch> batches;
  for (std::size_t b = 0; b < texts.size(); b += options.batch_size) {
    batches.push_back({b, std::min(texts.size(), b + options.batch_size)});
  }

  std::vector<std::vector<float>> rows(texts.size());
  std::vector<std::size_t> dims(batches.size(), 0);
  Counters counters;
  const std::size_t concurrency = std::max<std::size_t>(1, options.concurrency);
  for (std::size_t wave = 0; wave < batches.size(); wave += concurrency) {
    const std::size_t wave_end = std::min(batches.size(), wave + concurrency);
    if (wave_end - wave == 1) {
      dims[wave] = post_batch(options, texts, batches[wave], rows, counters);
      continue;
    }
    std::vector<std::future<std::size_t>> pending;
    for (std::size_t b = wave; b < wave_end; ++b) {
      pending.push_back(std::async(std::launch::async, [&, b] {
        return post_batch(options, texts, batches[b], rows, counters);
      }));
    }
    for (std::size_t b = wave; b < wave_end; ++b) dims[b] = pending[b - wave].get();
  }

  const std::size_t dim = dims.front();
  for (const std::size_t d : dims) {
    BITEXT_CHECK(d == dim, DimensionMismatch, "provider changed dimension between batches");
  }
  EmbeddingMatrix matrix(dim);
  for (std::size_t i = 0; i < texts.size(); ++i) matrix.add(ids[i], rows[i]);
  const std::size_t renormalized = matrix.normalize_rows();
  if (report) {
    report->requests += counters.requests;
    report->retries += counters.retries;
    report->renormalized += renormalized;
  }
  return matrix;
}

EmbeddingMatrix fetch_remote_embeddings(const std::vector<SentenceRecord>& sentences,
                                        const RemoteEmbedderOptions& options, FetchReport* report) {
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  texts.reserve(sentences.size());
  ids.reserve(sentences.size());
  for (const auto& s : sentences) {
    texts.push_back(s.text);
    ids.push_back(s.sent_id);
  }
  return fetch_remote_embeddings(texts, ids, options, report);
}

}  // namespace bitext
