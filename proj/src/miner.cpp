#include "bitext/miner.hpp"

#include <algorithm>
#include <unordered_map>

#include "bitext/error.hpp"
#include "bitext/kmeans.hpp"

namespace bitext {

namespace {

// float scores within this distance of the row maximum are re-scored exactly
constexpr float kRescoreSlack = 1e-4F;

std::string render_bucket(const BucketKey& key) { return key.value; }

struct Indexed {
  // sentence index -> embedding row, for sentences that have one
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::size_t missing = 0;
};

Indexed index_sentences(const MiningCorpus& corpus) {
  Indexed out;
  out.rows.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto row = corpus.embeddings.find(corpus.sentences[i].sent_id);
    if (row) {
      out.rows.emplace_back(i, *row);
    } else {
      ++out.missing;
    }
  }
  return out;
}

void check_dims(const MiningCorpus& src, const MiningCorpus& tgt) {
  if (src.embeddings.empty() || tgt.embeddings.empty()) return;
  BITEXT_CHECK(src.embeddings.dim() == tgt.embeddings.dim(), DimensionMismatch,
               "source embeddings have dimension " + std::to_string(src.embeddings.dim()) + ", target " +
                   std::to_string(tgt.embeddings.dim()));
}

CandidatePair make_pair(const MiningCorpus& src, std::size_t src_sentence, const MiningCorpus& tgt,
                        std::size_t tgt_sentence, double las, MiningMode mode, std::string bucket) {
  const auto& s = src.sentences[src_sentence];
  const auto& t = tgt.sentences[tgt_sentence];
  CandidatePair p;
  p.src_id = s.sent_id;
  p.tgt_id = t.sent_id;
  p.src_lang = src.lang;
  p.tgt_lang = tgt.lang;
  p.src_text = s.text;
  p.tgt_text = t.text;
  p.las = las;
  p.mode = mode;
  p.bucket = std::move(bucket);
  return p;
}

// Sorts a candidate into accepted / near-threshold / dropped.
struct Sorter {
  double threshold;
  double margin;

  bool accept(CandidatePair&& pair, MiningResult& out, BucketCounts* counts) const {
    ++out.report.candidates;
    if (pair.las >= threshold) {
      ++out.report.accepted;
      if (counts) ++counts->accepted;
      out.pairs.push_back(std::move(pair));
      return true;
    }
    ++out.report.below_threshold;
    if (pair.las - threshold >= -margin - 1e-12) {
      ++out.report.near_threshold;
      out.near_threshold.push_back(std::move(pair));
    }
    return false;
  }
};

MiningResult mine_bucketed(const MiningCorpus& src, const MiningCorpus& tgt, const MinerOptions& options,
                           MiningMode mode) {
  options.thresholds.validate();
  check_dims(src, tgt);
  MiningResult result;
  auto& report = result.report;
  report.mode = mode;
  report.threshold = options.thresholds.for_mode(mode);
  report.sources = src.sentences.size();
  report.targets = tgt.sentences.size();

  const auto src_rows = index_sentences(src);
  const auto tgt_rows = index_sentences(tgt);
  report.missing_embeddings = src_rows.missing + tgt_rows.missing;

  using Group = std::vector<std::pair<std::size_t, std::size_t>>;
  std::map<std::string, Group> src_groups;
  std::map<std::string, Group> tgt_groups;
  for (const auto& r : src_rows.rows) src_groups[render_bucket(src.sentences[r.first].bucket)].push_back(r);
  for (const auto& r : tgt_rows.rows) tgt_groups[render_bucket(tgt.sentences[r.first].bucket)].push_back(r);

  if (mode == MiningMode::docpair) {
    for (const auto& [key, group] : src_groups) {
      if (!tgt_groups.contains(key)) ++report.unpaired_documents;
    }
    for (const auto& [key, group] : tgt_groups) {
      if (!src_groups.contains(key)) ++report.unpaired_documents;
    }
  }

  std::vector<const std::string*> keys;
  for (const auto& [key, group] : tgt_groups) {
    auto& counts = report.buckets[key];
    counts.targets = group.size();
    const auto it = src_groups.find(key);
    counts.sources = it == src_groups.end() ? 0 : it->second.size();
    if (counts.sources == 0) {
      report.targets_without_sources += group.size();
    } else {
      keys.push_back(&key);
    }
  }

  // buckets are independent; results are merged in key order
  std::vector<std::vector<std::pair<std::size_t, Alignment>>> aligned(keys.size());
  const auto nkeys = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < nkeys; ++b) {
    const auto& key = *keys[static_cast<std::size_t>(b)];
    const auto& sg = src_groups.at(key);
    const auto& tg = tgt_groups.at(key);
    std::vector<std::size_t> srows;
    std::vector<std::size_t> trows;
    for (const auto& r : sg) srows.push_back(r.second);
    for (const auto& r : tg) trows.push_back(r.second);
    const auto alignments = align_bucket(src.embeddings.select(srows), tgt.embeddings.select(trows));
    auto& out = aligned[static_cast<std::size_t>(b)];
    for (std::size_t t = 0; t < alignments.size(); ++t) out.emplace_back(t, alignments[t]);
  }

  const Sorter sorter{report.threshold, options.near_margin};
  for (std::size_t b = 0; b < keys.size(); ++b) {
    const auto& key = *keys[b];
    const auto& sg = src_groups.at(key);
    const auto& tg = tgt_groups.at(key);
    auto& counts = report.buckets[key];
    for (const auto& [t, a] : aligned[b]) {
      sorter.accept(make_pair(src, sg[a.src_row].first, tgt, tg[t].first, a.las, mode, key), result, &counts);
    }
  }
  sort_canonical(result.pairs);
  sort_canonical(result.near_threshold);
  return result;
}

}  // namespace

double ThresholdPolicy::for_mode(MiningMode mode) const {
  switch (mode) {
    case MiningMode::comparable:
      return comparable;
    case MiningMode::docpair:
      return docpair;
    case MiningMode::monolingual:
      return monolingual;
    case MiningMode::pivot:
      break;
  }
  BITEXT_THROW(InvalidArgument, "pivot pairs have no mining threshold");
}

void ThresholdPolicy::validate() const {
  for (const double t : {comparable, docpair, monolingual}) {
    BITEXT_CHECK(t > 0.0 && t < 1.0, InvalidArgument, "thresholds must lie in (0, 1)");
  }
}

nlohmann::json MiningReport::to_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["threshold"] = threshold;
  j["sources"] = sources;
  j["targets"] = targets;
  j["candidates"] = candidates;
  j["accepted"] = accepted;
  j["below_threshold"] = below_threshold;
  j["near_threshold"] = near_threshold;
  j["missing_embeddings"] = missing_embeddings;
  j["unpaired_documents"] = unpaired_documents;
  j["targets_without_sources"] = targets_without_sources;
  auto& b = j["buckets"] = nlohmann::json::object();
  for (const auto& [key, c] : buckets) {
    b[key] = {{"sources", c.sources}, {"targets", c.targets}, {"accepted", c.accepted}};
  }
  return j;
}

std::vector<Alignment> align_bucket(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt) {
  if (src.empty() || tgt.empty()) return {};
  BITEXT_CHECK(src.dim() == tgt.dim(), DimensionMismatch, "bucket sides differ in dimension");
  const std::size_t dim = src.dim();
  const std::size_t ns = src.count();
  const std::size_t nt = tgt.count();

  std::vector<Alignment> out(nt);
  const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(1024, (std::size_t{1} << 22) / ns));
  std::vector<float> scores(block * ns);
  for (std::size_t start = 0; start < nt; start += block) {
    const std::size_t rows = std::min(block, nt - start);
    inner_products(tgt.values().data() + start * dim, rows, src.values().data(), ns, dim, scores.data());
    for (std::size_t r = 0; r < rows; ++r) {
      const float* row = scores.data() + r * ns;
      const float top = *std::max_element(row, row + ns);
      const auto query = tgt.row(start + r);
      Alignment best{ns, 0.0};
      for (std::size_t s = 0; s < ns; ++s) {
        if (row[s] < top - kRescoreSlack) continue;
        const double las = cosine_similarity(query, src.row(s));
        if (best.src_row == ns || las > best.las || (las == best.las && src.id(s) < src.id(best.src_row))) {
          best = {s, las};
        }
      }
      out[start + r] = best;
    }
  }
  return out;
}

MiningResult mine_comparable(const MiningCorpus& src, const MiningCorpus& tgt, const MinerOptions& options) {
  return mine_bucketed(src, tgt, options, MiningMode::comparable);
}

MiningResult mine_docpair(const MiningCorpus& src, const MiningCorpus& tgt, const MinerOptions& options) {
  return mine_bucketed(src, tgt, options, MiningMode::docpair);
}

MiningResult mine_monolingual(const MiningCorpus& src, const IvfPqIndex& index, const MiningCorpus& tgt,
                              const MinerOptions& options) {
  options.thresholds.validate();
  BITEXT_CHECK(index.size() > 0, EmptyIndex, "monolingual mining needs a populated index");
  BITEXT_CHECK(options.k >= 1, InvalidArgument, "k must be at least 1");
  check_dims(src, tgt);
  if (!tgt.embeddings.empty()) {
    BITEXT_CHECK(tgt.embeddings.dim() == index.dim(), DimensionMismatch, "index and target embeddings differ in dimension");
  }

  MiningResult result;
  auto& report = result.report;
  report.mode = MiningMode::monolingual;
  report.threshold = options.thresholds.monolingual;
  report.sources = src.sentences.size();
  report.targets = tgt.sentences.size();

  std::unordered_map<std::string_view, std::size_t> src_sentence;
  src_sentence.reserve(src.sentences.size());
  for (std::size_t i = 0; i < src.sentences.size(); ++i) src_sentence.emplace(src.sentences[i].sent_id, i);

  const auto tgt_rows = index_sentences(tgt);
  report.missing_embeddings = tgt_rows.missing;
  const std::size_t dim = index.dim();
  std::vector<float> queries(tgt_rows.rows.size() * dim);
  for (std::size_t q = 0; q < tgt_rows.rows.size(); ++q) {
    const auto row = tgt.embeddings.row(tgt_rows.rows[q].second);
    std::copy(row.begin(), row.end(), queries.begin() + static_cast<std::ptrdiff_t>(q * dim));
  }
  const std::size_t nprobe = options.nprobe > 0 ? options.nprobe : IvfPqIndex::default_nprobe(index.nlist());
  const auto hits = index.search_batch(queries, nprobe, options.k);

  const Sorter sorter{report.threshold, options.near_margin};
  for (std::size_t q = 0; q < hits.size(); ++q) {
    const auto query = tgt.embeddings.row(tgt_rows.rows[q].second);
    const SearchHit* best_hit = nullptr;
    double best_las = 0.0;
    std::size_t best_sentence = 0;
    for (const auto& hit : hits[q]) {
      const auto row = src.embeddings.find(hit.sent_id);
      const auto sentence = src_sentence.find(hit.sent_id);
      BITEXT_CHECK(row && sentence != src_sentence.end(), InvalidArgument,
                   "index returned " + hit.sent_id + ", which the source corpus lacks");
      const double las = cosine_similarity(query, src.embeddings.row(*row));
      if (!best_hit || las > best_las || (las == best_las && hit.sent_id < best_hit->sent_id)) {
        best_hit = &hit;
        best_las = las;
        best_sentence = sentence->second;
      }
    }
    if (!best_hit) continue;
    auto pair = make_pair(src, best_sentence, tgt, tgt_rows.rows[q].first, best_las, MiningMode::monolingual, "*");
    pair.approx_score = best_hit->score;
    sorter.accept(std::move(pair), result, nullptr);
  }
  sort_canonical(result.pairs);
  sort_canonical(result.near_threshold);
  return result;
}

}  // namespace bitext
