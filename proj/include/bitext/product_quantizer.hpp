#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bitext/kmeans.hpp"

namespace bitext {

/// Splits a d-dimensional vector into m subvectors and encodes each as the
/// index of its nearest centroid in a 256-entry codebook (one byte each).
class ProductQuantizer {
 public:
  static constexpr std::size_t kCodebookSize = 256;

  ProductQuantizer() = default;
  /// Untrained quantizer; throws DimensionNotDivisible unless m divides dim.
  ProductQuantizer(std::size_t dim, std::size_t m);

  /// Per-subspace k-means over `n` rows. Throws InsufficientData below 256 rows.
  void train(std::span<const float> data, const KMeansOptions& options = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t subspaces() const noexcept { return m_; }
  std::size_t sub_dim() const noexcept { return sub_dim_; }
  std::size_t code_size() const noexcept { return m_; }
  bool trained() const noexcept { return !codebooks_.empty(); }

  /// m x 256 x sub_dim floats.
  std::span<const float> codebooks() const noexcept { return codebooks_; }
  void set_codebooks(std::vector<float> codebooks);
  const float* centroid(std::size_t subspace, std::size_t code) const {
    return codebooks_.data() + (subspace * kCodebookSize + code) * sub_dim_;
  }

  void encode(std::span<const float> x, std::uint8_t* code) const;
  /// Encodes `n` rows into n x m bytes.
  void encode_batch(std::span<const float> x, std::size_t n, std::uint8_t* codes) const;
  void decode(const std::uint8_t* code, std::span<float> out) const;

  /// table[j * 256 + c] = <query_j, centroid_j[c]>.
  void inner_product_table(std::span<const float> query, float* table) const;

  /// Mean squared reconstruction error over `n` rows.
  double reconstruction_error(std::span<const float> x, std::size_t n) const;

 private:
  std::size_t dim_ = 0;
  std::size_t m_ = 0;
  std::size_t sub_dim_ = 0;
  std::vector<float> codebooks_;
  std::vector<float> columns_;  // per subspace: sub_dim x 256, for table building

  void build_columns();
};

}  // namespace bitext
