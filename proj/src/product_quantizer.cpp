#include "bitext/product_quantizer.hpp"

#include <algorithm>
#include <string>

#include "bitext/error.hpp"
#include "bitext/rng.hpp"

namespace bitext {

ProductQuantizer::ProductQuantizer(std::size_t dim, std::size_t m) : dim_(dim), m_(m) {
  BITEXT_CHECK(m > 0 && dim > 0, InvalidArgument, "dimension and subspace count must be positive");
  BITEXT_CHECK(dim % m == 0, DimensionNotDivisible,
               "m=" + std::to_string(m) + " does not divide d=" + std::to_string(dim));
  sub_dim_ = dim / m;
}

void ProductQuantizer::train(std::span<const float> data, const KMeansOptions& options) {
  BITEXT_CHECK(data.size() % dim_ == 0, DimensionMismatch, "training data is not a whole number of rows");
  const std::size_t n = data.size() / dim_;
  BITEXT_CHECK(n >= kCodebookSize, InsufficientData,
               "product quantizer needs at least 256 training vectors, got " + std::to_string(n));

  codebooks_.assign(m_ * kCodebookSize * sub_dim_, 0.0F);
  std::vector<float> sub(n * sub_dim_);
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(data.data() + i * dim_ + j * sub_dim_, sub_dim_,
                  sub.begin() + static_cast<std::ptrdiff_t>(i * sub_dim_));
    }
    KMeansOptions sub_options = options;
    sub_options.seed = splitmix64(options.seed + j);
    const auto result = train_kmeans(sub, sub_dim_, kCodebookSize, sub_options);
    std::copy(result.centroids.begin(), result.centroids.end(),
              codebooks_.begin() + static_cast<std::ptrdiff_t>(j * kCodebookSize * sub_dim_));
  }
  build_columns();
}

void ProductQuantizer::build_columns() {
  columns_.assign(codebooks_.size(), 0.0F);
  for (std::size_t j = 0; j < m_; ++j) {
    float* block = columns_.data() + j * kCodebookSize * sub_dim_;
    for (std::size_t c = 0; c < kCodebookSize; ++c) {
      const float* entry = centroid(j, c);
      for (std::size_t d = 0; d < sub_dim_; ++d) block[d * kCodebookSize + c] = entry[d];
    }
  }
}

void ProductQuantizer::set_codebooks(std::vector<float> codebooks) {
  BITEXT_CHECK(codebooks.size() == m_ * kCodebookSize * sub_dim_, FormatError, "codebook block has the wrong size");
  codebooks_ = std::move(codebooks);
  build_columns();
}

void ProductQuantizer::encode(std::span<const float> x, std::uint8_t* code) const {
  BITEXT_CHECK(x.size() == dim_, DimensionMismatch, "encode: wrong dimension");
  encode_batch(x, 1, code);
}

void ProductQuantizer::encode_batch(std::span<const float> x, std::size_t n, std::uint8_t* codes) const {
  BITEXT_CHECK(x.size() >= n * dim_, DimensionMismatch, "encode: wrong dimension");
  std::vector<float> sub(n * sub_dim_);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(x.data() + i * dim_ + j * sub_dim_, sub_dim_, sub.begin() + static_cast<std::ptrdiff_t>(i * sub_dim_));
    }
    assign_nearest(sub.data(), n, centroid(j, 0), kCodebookSize, sub_dim_, labels.data());
    for (std::size_t i = 0; i < n; ++i) codes[i * m_ + j] = static_cast<std::uint8_t>(labels[i]);
  }
}

void ProductQuantizer::decode(const std::uint8_t* code, std::span<float> out) const {
  BITEXT_CHECK(out.size() == dim_, DimensionMismatch, "decode: wrong dimension");
  for (std::size_t j = 0; j < m_; ++j) {
    std::copy_n(centroid(j, code[j]), sub_dim_, out.begin() + static_cast<std::ptrdiff_t>(j * sub_dim_));
  }
}

void ProductQuantizer::inner_product_table(std::span<const float> query, float* table) const {
  for (std::size_t j = 0; j < m_; ++j) {
    const float* sub = query.data() + j * sub_dim_;
    const float* block = columns_.data() + j * kCodebookSize * sub_dim_;
    float* out = table + j * kCodebookSize;
    std::fill_n(out, kCodebookSize, 0.0F);
    for (std::size_t d = 0; d < sub_dim_; ++d) {
      const float q = sub[d];
      const float* col = block + d * kCodebookSize;
#pragma omp simd
      for (std::size_t c = 0; c < kCodebookSize; ++c) out[c] += q * col[c];
    }
  }
}

double ProductQuantizer::reconstruction_error(std::span<const float> x, std::size_t n) const {
  std::vector<std::uint8_t> codes(n * m_);
  encode_batch(x, n, codes.data());
  std::vector<float> decoded(dim_);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.subspan(i * dim_, dim_);
    decode(codes.data() + i * m_, decoded);
    total += l2_sqr(row.data(), decoded.data(), dim_);
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

}  // namespace bitext
