#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bitext {

/// Embedding dimension used when nothing else says otherwise.
inline constexpr std::size_t kDefaultEmbeddingDim = 768;

/// Unit norm tolerance beyond which imported rows are renormalized.
inline constexpr double kUnitNormTolerance = 1e-4;

/// Returns v / |v|. Throws ZeroVector for an all-zero input.
std::vector<float> normalize(std::span<const float> v);

/// In-place variant; returns the original norm.
double normalize_in_place(std::span<float> v);

double l2_norm(std::span<const float> v);

/// Inner product accumulated in double. Throws DimensionMismatch.
double dot(std::span<const float> u, std::span<const float> v);

/// The alignment score: inner product of unit vectors.
inline double cosine_similarity(std::span<const float> u, std::span<const float> v) { return dot(u, v); }

/// Dense row-major block of sentence embeddings keyed by sentence id.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}
  EmbeddingMatrix(std::size_t dim, std::vector<std::string> ids, std::vector<float> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<float> mutable_row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
  std::span<const float> values() const noexcept { return values_; }

  /// Appends a row; throws DimensionMismatch or DuplicateId.
  void add(std::string id, std::span<const float> v);
  std::optional<std::size_t> find(std::string_view id) const;

  /// Rows in the order of `rows`.
  EmbeddingMatrix select(std::span<const std::size_t> rows) const;

  /// Renormalizes rows whose norm is off by more than `tolerance`; returns how many.
  std::size_t normalize_rows(double tolerance = kUnitNormTolerance);

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.values_ == b.values_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ImportReport {
  std::size_t rows = 0;
  std::size_t renormalized = 0;
};

/// Sidecar id file next to an embedding file: "<path>.ids".
std::filesystem::path default_ids_path(const std::filesystem::path& embeddings);

/// Binary format: "SEMB", version u32, dim u32, count u64, dtype u8 (0 = f32),
/// then count x dim little-endian f32. Ids come from the newline-delimited
/// sidecar. Throws FormatError, TruncatedFile, Io.
EmbeddingMatrix import_embeddings(const std::filesystem::path& path, ImportReport* report = nullptr,
                                  const std::filesystem::path& ids_path = {});

void export_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path,
                       const std::filesystem::path& ids_path = {});

}  // namespace bitext
