#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bitext/embedding.hpp"
#include "bitext/kmeans.hpp"
#include "bitext/product_quantizer.hpp"

namespace bitext {

struct SearchHit {
  std::string sent_id;
  float score = 0.0F;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct IvfPqOptions {
  std::size_t nlist = 0;  // 0 picks default_nlist(n) at training time
  std::size_t m = 64;
  bool residual = true;
  KMeansOptions kmeans;
  /// Cap on rows used to train the product quantizer.
  std::size_t max_pq_train = 65536;
};

/// Inverted-file index with product-quantized codes. Lists are chosen by
/// Euclidean distance to the coarse centroids; inside the scanned lists
/// candidates are ranked by the asymmetric inner-product estimate
///   score = <q, c> + sum_j <q_j, codebook_j[code_j]>   (residual mode)
///   score =          sum_j <q_j, codebook_j[code_j]>   (plain mode).
/// Ties go to the lexicographically lower sent_id.
class IvfPqIndex {
 public:
  IvfPqIndex() = default;
  IvfPqIndex(std::size_t dim, IvfPqOptions options);

  /// max(16, round(sqrt(n))), clamped to n.
  static std::size_t default_nlist(std::size_t n);
  /// max(1, ceil(nlist / 16)).
  static std::size_t default_nprobe(std::size_t nlist);

  /// Trains coarse centroids, then the product quantizer (on residuals in
  /// residual mode). Throws InsufficientData, DimensionNotDivisible.
  void train(const EmbeddingMatrix& sample);
  void add(const EmbeddingMatrix& matrix);

  std::vector<SearchHit> search(std::span<const float> query, std::size_t nprobe, std::size_t k) const;
  /// Row-major queries, one result list per query.
  std::vector<std::vector<SearchHit>> search_batch(std::span<const float> queries, std::size_t nprobe,
                                                   std::size_t k) const;

  /// The `nprobe` lists scanned for `query`, best first.
  std::vector<std::size_t> probe_order(std::span<const float> query, std::size_t nprobe) const;

  void save(const std::filesystem::path& path) const;
  static IvfPqIndex load(const std::filesystem::path& path);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nlist() const noexcept { return lists_.size(); }
  std::size_t size() const noexcept { return ids_.size(); }
  bool residual() const noexcept { return options_.residual; }
  bool trained() const noexcept { return !lists_.empty(); }
  const ProductQuantizer& quantizer() const noexcept { return pq_; }
  std::span<const float> coarse_centroids() const noexcept { return centroids_; }
  std::size_t list_size(std::size_t list) const { return lists_.at(list).offsets.size(); }
  /// List holding `sent_id`, or nlist() when absent.
  std::size_t list_of(std::string_view sent_id) const;
  /// Reconstruction of an indexed vector from its list centroid and code.
  std::vector<float> reconstruct(std::string_view sent_id) const;

 private:
  struct InvertedList {
    std::vector<std::uint64_t> offsets;  // into ids_
    std::vector<std::uint8_t> codes;     // offsets.size() x m
  };

  void require_dim(std::size_t d, const char* what) const;
  void finish_coarse();

  std::size_t dim_ = 0;
  IvfPqOptions options_;
  std::vector<float> centroids_;  // nlist x dim
  std::vector<float> centroid_half_norms_;
  ProductQuantizer pq_;
  std::vector<InvertedList> lists_;
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> id_list_;
  std::unordered_map<std::string, std::uint64_t> id_offsets_;
};

/// Exhaustive inner-product search; the ground truth for recall.
std::vector<SearchHit> exact_search(const EmbeddingMatrix& matrix, std::span<const float> query, std::size_t k);

/// Exhaustive top-k for many queries at once (one GEMM per block).
std::vector<std::vector<SearchHit>> exact_search_batch(const EmbeddingMatrix& matrix, std::span<const float> queries,
                                                       std::size_t k);

}  // namespace bitext
