#include "bitext/kmeans.hpp"

#include <algorithm>
#include <cblas.h>
#include <limits>
#include <string>

#include "bitext/error.hpp"
#include "bitext/rng.hpp"

namespace bitext {

float inner_product(const float* a, const float* b, std::size_t dim) {
  float sum = 0.0F;
#pragma omp simd reduction(+ : sum)
  for (std::size_t i = 0; i < dim; ++i) sum += a[i] * b[i];
  return sum;
}

float l2_sqr(const float* a, const float* b, std::size_t dim) {
  float sum = 0.0F;
#pragma omp simd reduction(+ : sum)
  for (std::size_t i = 0; i < dim; ++i) {
    const float d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::vector<float> row_norms_sqr(const float* x, std::size_t n, std::size_t dim) {
  std::vector<float> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = inner_product(x + i * dim, x + i * dim, dim);
  return norms;
}

void inner_products(const float* x, std::size_t n, const float* centroids, std::size_t k, std::size_t dim,
                    float* out) {
  if (n == 0 || k == 0) return;
  cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasTrans, static_cast<int>(n), static_cast<int>(k),
              static_cast<int>(dim), 1.0F, x, static_cast<int>(dim), centroids, static_cast<int>(dim), 0.0F, out,
              static_cast<int>(k));
}

namespace {

// argmin_j |c_j|^2 - 2 x.c_j, lowest index on ties: a vectorized minimum,
// then the first position holding it.
std::size_t argmin_expanded(const float* norms, const float* ip, std::size_t k, float* scratch) {
  float best = std::numeric_limits<float>::infinity();
#pragma omp simd reduction(min : best)
  for (std::size_t j = 0; j < k; ++j) {
    const float value = norms[j] - 2.0F * ip[j];
    scratch[j] = value;
    best = std::min(best, value);
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (scratch[j] == best) return j;
  }
  return 0;  // only reachable with NaN inputs
}

}  // namespace

void assign_nearest(const float* x, std::size_t n, const float* centroids, std::size_t k, std::size_t dim,
                    std::uint32_t* labels, float* distances) {
  if (n == 0) return;
  BITEXT_CHECK(k > 0, InvalidArgument, "no centroids to assign to");
  const auto centroid_norms = row_norms_sqr(centroids, k, dim);

  // |x - c|^2 = |x|^2 + |c|^2 - 2 x.c with the cross terms from one GEMM per block
  const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(4096, (std::size_t{1} << 16) / k));
  std::vector<float> ip(block * k);
  std::vector<float> scratch(k);
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t rows = std::min(block, n - start);
    inner_products(x + start * dim, rows, centroids, k, dim, ip.data());
    for (std::size_t r = 0; r < rows; ++r) {
      const float* row = ip.data() + r * k;
      const std::size_t best = argmin_expanded(centroid_norms.data(), row, k, scratch.data());
      labels[start + r] = static_cast<std::uint32_t>(best);
      if (distances) {
        const float* xr = x + (start + r) * dim;
        // recomputed directly: the expanded form loses precision near zero
        distances[start + r] = l2_sqr(xr, centroids + best * dim, dim);
      }
    }
  }
}

namespace {

std::vector<float> kmeans_plus_plus(const float* x, std::size_t n, std::size_t dim, std::size_t k, Rng& rng) {
  std::vector<float> centroids(k * dim);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());

  std::size_t chosen = uniform_index(rng, n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(x + chosen * dim, dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
    if (c + 1 == k) break;
    const float* centroid = centroids.data() + c * dim;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_dist[i] = std::min<double>(min_dist[i], l2_sqr(x + i * dim, centroid, dim));
      total += min_dist[i];
    }
    if (total <= 0.0) {
      // every point coincides with a centroid already
      chosen = uniform_index(rng, n);
      continue;
    }
    const double target = uniform_real(rng) * total;
    double cumulative = 0.0;
    chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cumulative += min_dist[i];
      if (cumulative > target && min_dist[i] > 0.0) {
        chosen = i;
        break;
      }
    }
  }
  return centroids;
}

}  // namespace

KMeansResult train_kmeans(std::span<const float> data, std::size_t dim, std::size_t k, const KMeansOptions& options) {
  BITEXT_CHECK(dim > 0 && data.size() % dim == 0, DimensionMismatch, "data is not a whole number of rows");
  const std::size_t total = data.size() / dim;
  BITEXT_CHECK(k >= 1, InvalidArgument, "k must be at least 1");
  BITEXT_CHECK(total >= k, InsufficientData,
               "k-means with k=" + std::to_string(k) + " needs at least k points, got " + std::to_string(total));

  Rng rng(options.seed);

  std::vector<float> sampled;
  const float* x = data.data();
  std::size_t n = total;
  if (options.max_points_per_centroid > 0 && total > k * options.max_points_per_centroid) {
    n = k * options.max_points_per_centroid;
    auto rows = sample_without_replacement(total, n, rng);
    std::sort(rows.begin(), rows.end());
    sampled.resize(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(data.data() + rows[i] * dim, dim, sampled.begin() + static_cast<std::ptrdiff_t>(i * dim));
    }
    x = sampled.data();
  }

  KMeansResult result;
  result.centroids = kmeans_plus_plus(x, n, dim, k, rng);

  std::vector<std::uint32_t> labels(n);
  std::vector<float> distances(n);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    assign_nearest(x, n, result.centroids.data(), k, dim, labels.data(), distances.data());
    double objective = 0.0;
    for (const float d : distances) objective += d;
    result.objective.push_back(objective);

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = labels[i];
      ++counts[c];
      double* s = sums.data() + c * dim;
      const float* xi = x + i * dim;
      for (std::size_t d = 0; d < dim; ++d) s[d] += xi[d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      float* centroid = result.centroids.data() + c * dim;
      const double* s = sums.data() + c * dim;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] = static_cast<float>(s[d] / static_cast<double>(counts[c]));
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      const auto largest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::size_t farthest = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != largest || distances[i] < 0.0F) continue;
        if (farthest == n || distances[i] > distances[farthest]) farthest = i;
      }
      if (farthest == n) continue;
      std::copy_n(x + farthest * dim, dim, result.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
      distances[farthest] = -1.0F;
      labels[farthest] = static_cast<std::uint32_t>(c);
      --counts[largest];
      counts[c] = 1;
      ++result.reseeded;
    }
  }
  return result;
}

}  // namespace bitext
