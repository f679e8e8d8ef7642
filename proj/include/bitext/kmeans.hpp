#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitext {

/// Float inner product; the compiler vectorizes the reduction.
float inner_product(const float* a, const float* b, std::size_t dim);
float l2_sqr(const float* a, const float* b, std::size_t dim);

/// Squared norms of `n` rows.
std::vector<float> row_norms_sqr(const float* x, std::size_t n, std::size_t dim);

/// For each of the `n` rows of `x`, the nearest of the `k` centroids by
/// Euclidean distance (ties go to the lower centroid index) and, when
/// `distances` is non-null, the squared distance to it.
void assign_nearest(const float* x, std::size_t n, const float* centroids, std::size_t k, std::size_t dim,
                    std::uint32_t* labels, float* distances = nullptr);

/// Inner products of every row of `x` with every centroid, row-major n x k.
void inner_products(const float* x, std::size_t n, const float* centroids, std::size_t k, std::size_t dim,
                    float* out);

struct KMeansOptions {
  std::size_t iterations = 20;
  std::uint64_t seed = 1234;
  /// Training points are subsampled to k * this many (0 keeps everything).
  std::size_t max_points_per_centroid = 256;
};

struct KMeansResult {
  std::vector<float> centroids;  // k x dim
  /// Sum of squared distances after each assignment step.
  std::vector<double> objective;
  std::size_t reseeded = 0;  // empty clusters re-seeded
};

/// Lloyd's algorithm with k-means++ seeding. An empty cluster is re-seeded
/// at the point of the largest cluster that lies farthest from its centroid.
/// Throws InsufficientData when n < k.
KMeansResult train_kmeans(std::span<const float> data, std::size_t dim, std::size_t k,
                          const KMeansOptions& options = {});

}  // namespace bitext
