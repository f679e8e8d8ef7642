#include "bitext/ivfpq_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "bitext/binary_io.hpp"
#include "bitext/error.hpp"
#include "bitext/rng.hpp"

namespace bitext {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'V', 'F'};
constexpr std::uint32_t kVersion = 1;

struct Candidate {
  float score;
  const std::string* id;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return *a.id < *b.id;
}

// Bounded selection; the heap top is the current worst kept candidate.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { heap_.reserve(k); }

  void push(float score, const std::string* id) {
    const Candidate c{score, id};
    if (heap_.size() < k_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end(), better);
    } else if (better(c, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), better);
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end(), better);
    }
  }

  std::vector<SearchHit> take() {
    std::sort(heap_.begin(), heap_.end(), better);
    std::vector<SearchHit> hits;
    hits.reserve(heap_.size());
    for (const auto& c : heap_) hits.push_back({*c.id, c.score});
    return hits;
  }

 private:
  std::size_t k_;
  std::vector<Candidate> heap_;
};

}  // namespace

IvfPqIndex::IvfPqIndex(std::size_t dim, IvfPqOptions options) : dim_(dim), options_(options), pq_(dim, options.m) {}

std::size_t IvfPqIndex::default_nlist(std::size_t n) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return std::min(n, std::max<std::size_t>(16, root));
}

std::size_t IvfPqIndex::default_nprobe(std::size_t nlist) { return std::max<std::size_t>(1, (nlist + 15) / 16); }

void IvfPqIndex::require_dim(std::size_t d, const char* what) const {
  BITEXT_CHECK(d == dim_, DimensionMismatch,
               std::string(what) + " has dimension " + std::to_string(d) + ", index expects " + std::to_string(dim_));
}

void IvfPqIndex::finish_coarse() {
  const std::size_t k = centroids_.size() / dim_;
  const auto norms = row_norms_sqr(centroids_.data(), k, dim_);
  centroid_half_norms_.resize(k);
  for (std::size_t c = 0; c < k; ++c) centroid_half_norms_[c] = 0.5F * norms[c];
}

void IvfPqIndex::train(const EmbeddingMatrix& sample) {
  require_dim(sample.dim(), "training sample");
  const std::size_t n = sample.count();
  const std::size_t nlist = options_.nlist > 0 ? options_.nlist : default_nlist(n);
  BITEXT_CHECK(nlist >= 1, InsufficientData, "cannot train an index on an empty sample");

  auto coarse = train_kmeans(sample.values(), dim_, nlist, options_.kmeans);
  centroids_ = std::move(coarse.centroids);
  finish_coarse();

  Rng rng(splitmix64(options_.kmeans.seed ^ 0x5051ULL));
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  if (options_.max_pq_train > 0 && n > options_.max_pq_train) {
    rows = sample_without_replacement(n, options_.max_pq_train, rng);
    std::sort(rows.begin(), rows.end());
  }
  std::vector<float> pq_data(rows.size() * dim_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = sample.row(rows[i]);
    std::copy(row.begin(), row.end(), pq_data.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }
  if (options_.residual) {
    std::vector<std::uint32_t> labels(rows.size());
    assign_nearest(pq_data.data(), rows.size(), centroids_.data(), nlist, dim_, labels.data());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      float* r = pq_data.data() + i * dim_;
      const float* c = centroids_.data() + labels[i] * dim_;
      for (std::size_t d = 0; d < dim_; ++d) r[d] -= c[d];
    }
  }
  pq_ = ProductQuantizer(dim_, options_.m);
  pq_.train(pq_data, options_.kmeans);

  lists_.assign(nlist, {});
  ids_.clear();
  id_list_.clear();
  id_offsets_.clear();
}

void IvfPqIndex::add(const EmbeddingMatrix& matrix) {
  BITEXT_CHECK(trained(), InvalidArgument, "index must be trained before adding vectors");
  if (matrix.empty()) return;
  require_dim(matrix.dim(), "added matrix");
  for (const auto& id : matrix.ids()) {
    BITEXT_CHECK(!id_offsets_.contains(id), DuplicateId, "sentence id already indexed: " + id);
  }

  const std::size_t n = matrix.count();
  std::vector<std::uint32_t> labels(n);
  assign_nearest(matrix.values().data(), n, centroids_.data(), nlist(), dim_, labels.data());

  const std::size_t m = pq_.code_size();
  std::vector<std::uint8_t> codes(n * m);
  if (options_.residual) {
    constexpr std::size_t kBlock = 8192;
    std::vector<float> residuals;
    for (std::size_t start = 0; start < n; start += kBlock) {
      const std::size_t rows = std::min(kBlock, n - start);
      residuals.assign(matrix.values().begin() + static_cast<std::ptrdiff_t>(start * dim_),
                       matrix.values().begin() + static_cast<std::ptrdiff_t>((start + rows) * dim_));
      for (std::size_t i = 0; i < rows; ++i) {
        const float* c = centroids_.data() + labels[start + i] * dim_;
        float* r = residuals.data() + i * dim_;
        for (std::size_t d = 0; d < dim_; ++d) r[d] -= c[d];
      }
      pq_.encode_batch(residuals, rows, codes.data() + start * m);
    }
  } else {
    pq_.encode_batch(matrix.values(), n, codes.data());
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t offset = ids_.size();
    ids_.push_back(matrix.id(i));
    id_list_.push_back(labels[i]);
    id_offsets_.emplace(matrix.id(i), offset);
    auto& list = lists_[labels[i]];
    list.offsets.push_back(offset);
    list.codes.insert(list.codes.end(), codes.begin() + static_cast<std::ptrdiff_t>(i * m),
                      codes.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
  }
}

std::vector<std::size_t> IvfPqIndex::probe_order(std::span<const float> query, std::size_t nprobe) const {
  require_dim(query.size(), "query");
  const std::size_t k = nlist();
  BITEXT_CHECK(nprobe >= 1, InvalidArgument, "probe count must be at least 1");
  nprobe = std::min(nprobe, k);
  // nearest by Euclidean distance: maximize <q, c> - |c|^2 / 2
  std::vector<float> score(k);
  for (std::size_t c = 0; c < k; ++c) {
    score[c] = inner_product(query.data(), centroids_.data() + c * dim_, dim_) - centroid_half_norms_[c];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nprobe), order.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] != score[b] ? score[a] > score[b] : a < b; });
  order.resize(nprobe);
  return order;
}

std::vector<SearchHit> IvfPqIndex::search(std::span<const float> query, std::size_t nprobe, std::size_t k) const {
  BITEXT_CHECK(size() > 0, EmptyIndex, "search on an empty index");
  BITEXT_CHECK(k >= 1, InvalidArgument, "result count must be at least 1");
  const auto probes = probe_order(query, nprobe);

  const std::size_t m = pq_.code_size();
  std::vector<float> table(m * ProductQuantizer::kCodebookSize);
  pq_.inner_product_table(query, table.data());

  TopK top(k);
  for (const std::size_t list_id : probes) {
    const auto& list = lists_[list_id];
    const float base =
        options_.residual ? inner_product(query.data(), centroids_.data() + list_id * dim_, dim_) : 0.0F;
    const std::uint8_t* code = list.codes.data();
    for (std::size_t e = 0; e < list.offsets.size(); ++e, code += m) {
      float score = base;
      for (std::size_t j = 0; j < m; ++j) score += table[j * ProductQuantizer::kCodebookSize + code[j]];
      top.push(score, &ids_[list.offsets[e]]);
    }
  }
  return top.take();
}

std::vector<std::vector<SearchHit>> IvfPqIndex::search_batch(std::span<const float> queries, std::size_t nprobe,
                                                             std::size_t k) const {
  BITEXT_CHECK(queries.size() % dim_ == 0, DimensionMismatch, "query block is not a whole number of rows");
  const std::size_t n = queries.size() / dim_;
  std::vector<std::vector<SearchHit>> results(n);
  if (n == 0) return results;
  BITEXT_CHECK(size() > 0, EmptyIndex, "search on an empty index");
  BITEXT_CHECK(nprobe >= 1 && k >= 1, InvalidArgument, "probe and result counts must be at least 1");
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    results[idx] = search(queries.subspan(idx * dim_, dim_), nprobe, k);
  }
  return results;
}

std::size_t IvfPqIndex::list_of(std::string_view sent_id) const {
  const auto it = id_offsets_.find(std::string(sent_id));
  return it == id_offsets_.end() ? nlist() : id_list_[it->second];
}

std::vector<float> IvfPqIndex::reconstruct(std::string_view sent_id) const {
  const auto it = id_offsets_.find(std::string(sent_id));
  BITEXT_CHECK(it != id_offsets_.end(), InvalidArgument, "sentence id not indexed: " + std::string(sent_id));
  const auto& list = lists_[id_list_[it->second]];
  const auto pos = static_cast<std::size_t>(std::find(list.offsets.begin(), list.offsets.end(), it->second) -
                                            list.offsets.begin());
  std::vector<float> out(dim_);
  pq_.decode(list.codes.data() + pos * pq_.code_size(), out);
  if (options_.residual) {
    const float* c = centroids_.data() + id_list_[it->second] * dim_;
    for (std::size_t d = 0; d < dim_; ++d) out[d] += c[d];
  }
  return out;
}

void IvfPqIndex::save(const std::filesystem::path& path) const {
  BITEXT_CHECK(trained(), InvalidArgument, "cannot save an untrained index");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  BITEXT_CHECK(out.good(), Io, "cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  io::write_le<std::uint32_t>(out, kVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  io::write_le<std::uint64_t>(out, nlist());
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(pq_.code_size()));
  io::write_le<std::uint8_t>(out, options_.residual ? 1 : 0);
  io::write_le_array<float>(out, centroids_);
  io::write_le_array<float>(out, pq_.codebooks());
  for (const auto& list : lists_) {
    io::write_le<std::uint64_t>(out, list.offsets.size());
    const std::size_t m = pq_.code_size();
    for (std::size_t e = 0; e < list.offsets.size(); ++e) {
      io::write_le<std::uint64_t>(out, list.offsets[e]);
      io::write_le_array<std::uint8_t>(out, std::span(list.codes).subspan(e * m, m));
    }
  }
  io::write_le<std::uint64_t>(out, ids_.size());
  for (const auto& id : ids_) {
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  out.flush();
  BITEXT_CHECK(out.good(), Io, "write failed for " + path.string());
}

IvfPqIndex IvfPqIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, sizeof(magic));
  BITEXT_CHECK(in.gcount() == 4, TruncatedFile, path.string() + " is shorter than its header");
  BITEXT_CHECK(std::equal(magic, magic + 4, kMagic), FormatError, path.string() + " is not an index file");
  const auto version = io::read_le<std::uint32_t>(in, "version");
  BITEXT_CHECK(version == kVersion, FormatError, "unsupported index version " + std::to_string(version));
  const auto dim = io::read_le<std::uint32_t>(in, "dimension");
  const auto nlist = io::read_le<std::uint64_t>(in, "list count");
  const auto m = io::read_le<std::uint32_t>(in, "subspace count");
  const auto residual = io::read_le<std::uint8_t>(in, "residual flag");
  BITEXT_CHECK(dim > 0 && nlist > 0 && m > 0 && residual <= 1, FormatError, "corrupt index header");
  BITEXT_CHECK(nlist <= (std::uint64_t{1} << 32), FormatError, "implausible list count");

  IvfPqOptions options;
  options.nlist = nlist;
  options.m = m;
  options.residual = residual == 1;
  IvfPqIndex index(dim, options);
  index.centroids_.resize(nlist * dim);
  io::read_le_array<float>(in, index.centroids_, "coarse centroids");
  std::vector<float> codebooks(std::size_t{m} * ProductQuantizer::kCodebookSize * (dim / m));
  io::read_le_array<float>(in, codebooks, "codebooks");
  index.pq_.set_codebooks(std::move(codebooks));
  index.finish_coarse();

  index.lists_.resize(nlist);
  std::uint64_t entries = 0;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> owner;
  for (std::uint64_t l = 0; l < nlist; ++l) {
    auto& list = index.lists_[l];
    const auto length = io::read_le<std::uint64_t>(in, "list length");
    BITEXT_CHECK(length <= (std::uint64_t{1} << 40), FormatError, "implausible list length");
    list.offsets.resize(length);
    list.codes.resize(length * m);
    for (std::uint64_t e = 0; e < length; ++e) {
      list.offsets[e] = io::read_le<std::uint64_t>(in, "entry offset");
      io::read_le_array<std::uint8_t>(in, std::span(list.codes).subspan(e * m, m), "entry code");
      owner.emplace_back(list.offsets[e], static_cast<std::uint32_t>(l));
    }
    entries += length;
  }
  const auto count = io::read_le<std::uint64_t>(in, "id count");
  BITEXT_CHECK(count == entries, FormatError, "id table size does not match list entries");
  index.ids_.resize(count);
  index.id_list_.assign(count, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = io::read_le<std::uint32_t>(in, "id length");
    std::string id(len, '\0');
    in.read(id.data(), len);
    BITEXT_CHECK(in.gcount() == static_cast<std::streamsize>(len), TruncatedFile, "unexpected end of id table");
    BITEXT_CHECK(index.id_offsets_.emplace(id, i).second, DuplicateId, "id repeated in index file: " + id);
    index.ids_[i] = std::move(id);
  }
  for (const auto& [offset, list] : owner) {
    BITEXT_CHECK(offset < count, FormatError, "list entry points past the id table");
    index.id_list_[offset] = list;
  }
  BITEXT_CHECK(in.peek() == std::char_traits<char>::eof(), FormatError, path.string() + " has trailing bytes");
  return index;
}

std::vector<SearchHit> exact_search(const EmbeddingMatrix& matrix, std::span<const float> query, std::size_t k) {
  BITEXT_CHECK(!matrix.empty(), EmptyIndex, "exact search over an empty matrix");
  BITEXT_CHECK(query.size() == matrix.dim(), DimensionMismatch, "query dimension differs from the matrix");
  BITEXT_CHECK(k >= 1, InvalidArgument, "result count must be at least 1");
  TopK top(k);
  for (std::size_t i = 0; i < matrix.count(); ++i) {
    top.push(inner_product(query.data(), matrix.row(i).data(), matrix.dim()), &matrix.id(i));
  }
  return top.take();
}

std::vector<std::vector<SearchHit>> exact_search_batch(const EmbeddingMatrix& matrix, std::span<const float> queries,
                                                       std::size_t k) {
  BITEXT_CHECK(!matrix.empty(), EmptyIndex, "exact search over an empty matrix");
  BITEXT_CHECK(k >= 1, InvalidArgument, "result count must be at least 1");
  const std::size_t dim = matrix.dim();
  BITEXT_CHECK(queries.size() % dim == 0, DimensionMismatch, "query block is not a whole number of rows");
  const std::size_t nq = queries.size() / dim;
  const std::size_t n = matrix.count();
  std::vector<std::vector<SearchHit>> results(nq);
  const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(1024, (std::size_t{1} << 23) / n));
  std::vector<float> scores(block * n);
  for (std::size_t start = 0; start < nq; start += block) {
    const std::size_t rows = std::min(block, nq - start);
    inner_products(queries.data() + start * dim, rows, matrix.values().data(), n, dim, scores.data());
    for (std::size_t r = 0; r < rows; ++r) {
      TopK top(k);
      const float* row = scores.data() + r * n;
      for (std::size_t i = 0; i < n; ++i) top.push(row[i], &matrix.id(i));
      results[start + r] = top.take();
    }
  }
  return results;
}

}  // namespace bitext
