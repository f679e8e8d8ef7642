#include "bitext/embedding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "bitext/binary_io.hpp"
#include "bitext/error.hpp"

namespace bitext {

namespace {

constexpr char kMagic[4] = {'S', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

}  // namespace

double l2_norm(std::span<const float> v) {
  double sum = 0.0;
  for (const float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

double normalize_in_place(std::span<float> v) {
  const double norm = l2_norm(v);
  BITEXT_CHECK(norm > 0.0, ZeroVector, "cannot normalize an all-zero vector");
  for (float& x : v) x = static_cast<float>(x / norm);
  return norm;
}

std::vector<float> normalize(std::span<const float> v) {
  std::vector<float> out(v.begin(), v.end());
  normalize_in_place(out);
  return out;
}

double dot(std::span<const float> u, std::span<const float> v) {
  BITEXT_CHECK(u.size() == v.size(), DimensionMismatch,
               "dimensions " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += static_cast<double>(u[i]) * v[i];
  return sum;
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::vector<std::string> ids, std::vector<float> values)
    : dim_(dim), ids_(std::move(ids)), values_(std::move(values)) {
  BITEXT_CHECK(values_.size() == ids_.size() * dim_, DimensionMismatch,
               "value count does not match ids x dim");
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    BITEXT_CHECK(index_.emplace(ids_[i], i).second, DuplicateId, "duplicate id '" + ids_[i] + "'");
  }
}

void EmbeddingMatrix::add(std::string id, std::span<const float> v) {
  BITEXT_CHECK(v.size() == dim_, DimensionMismatch,
               "row of dimension " + std::to_string(v.size()) + " into matrix of dimension " + std::to_string(dim_));
  BITEXT_CHECK(index_.emplace(id, ids_.size()).second, DuplicateId, "duplicate id '" + id + "'");
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), v.begin(), v.end());
}

std::optional<std::size_t> EmbeddingMatrix::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  std::vector<float> values;
  ids.reserve(rows.size());
  values.reserve(rows.size() * dim_);
  for (const std::size_t r : rows) {
    ids.push_back(ids_.at(r));
    const auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
  }
  return EmbeddingMatrix(dim_, std::move(ids), std::move(values));
}

std::size_t EmbeddingMatrix::normalize_rows(double tolerance) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < count(); ++i) {
    auto r = mutable_row(i);
    const double norm = l2_norm(r);
    BITEXT_CHECK(norm > 0.0, ZeroVector, "row '" + ids_[i] + "' is all zeros");
    if (std::abs(norm - 1.0) > tolerance) {
      normalize_in_place(r);
      ++changed;
    }
  }
  return changed;
}

std::filesystem::path default_ids_path(const std::filesystem::path& embeddings) {
  auto p = embeddings;
  p += ".ids";
  return p;
}

EmbeddingMatrix import_embeddings(const std::filesystem::path& path, ImportReport* report,
                                  const std::filesystem::path& ids_path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open embeddings " + path.string());

  char magic[4] = {};
  in.read(magic, 4);
  BITEXT_CHECK(in.gcount() == 4, TruncatedFile, "missing header in " + path.string());
  BITEXT_CHECK(std::memcmp(magic, kMagic, 4) == 0, FormatError, "bad magic in " + path.string());
  const auto version = io::read_le<std::uint32_t>(in, "version");
  BITEXT_CHECK(version == kVersion, FormatError, "unsupported version " + std::to_string(version));
  const auto dim = io::read_le<std::uint32_t>(in, "dim");
  const auto count = io::read_le<std::uint64_t>(in, "count");
  const auto dtype = io::read_le<std::uint8_t>(in, "dtype");
  BITEXT_CHECK(dtype == kDtypeF32, FormatError, "unsupported dtype " + std::to_string(dtype));
  BITEXT_CHECK(dim > 0, FormatError, "dimension must be positive");

  // size check before allocating so a corrupt count cannot request huge memory
  const auto header_end = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload = static_cast<std::uint64_t>(in.tellg() - header_end);
  in.seekg(header_end);
  const std::uint64_t row_bytes = std::uint64_t{dim} * sizeof(float);
  BITEXT_CHECK(count <= payload / row_bytes, TruncatedFile,
               path.string() + " holds " + std::to_string(payload / (sizeof(float) * dim)) + " of " +
                   std::to_string(count) + " rows");
  BITEXT_CHECK(payload == count * row_bytes, FormatError, "trailing bytes after embedding rows");

  std::vector<float> values(count * dim);
  io::read_le_array<float>(in, values, "embedding rows");

  const auto sidecar = ids_path.empty() ? default_ids_path(path) : ids_path;
  std::ifstream ids_in(sidecar, std::ios::binary);
  BITEXT_CHECK(ids_in.good(), Io, "cannot open id sidecar " + sidecar.string());
  std::vector<std::string> ids;
  ids.reserve(count);
  std::string line;
  while (std::getline(ids_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ids.push_back(line);
  }
  BITEXT_CHECK(ids.size() == count, FormatError,
               "sidecar has " + std::to_string(ids.size()) + " ids for " + std::to_string(count) + " rows");

  EmbeddingMatrix matrix(dim, std::move(ids), std::move(values));
  const std::size_t renormalized = matrix.normalize_rows();
  if (report) {
    report->rows = matrix.count();
    report->renormalized = renormalized;
  }
  return matrix;
}

void export_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path,
                       const std::filesystem::path& ids_path) {
  std::ofstream out(path, std::ios::binary);
  BITEXT_CHECK(out.good(), Io, "cannot write " + path.string());
  out.write(kMagic, 4);
  io::write_le<std::uint32_t>(out, kVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim()));
  io::write_le<std::uint64_t>(out, matrix.count());
  io::write_le<std::uint8_t>(out, kDtypeF32);
  io::write_le_array<float>(out, matrix.values());
  BITEXT_CHECK(out.good(), Io, "failed writing " + path.string());

  const auto sidecar = ids_path.empty() ? default_ids_path(path) : ids_path;
  std::ofstream ids_out(sidecar, std::ios::binary);
  BITEXT_CHECK(ids_out.good(), Io, "cannot write " + sidecar.string());
  for (const auto& id : matrix.ids()) ids_out << id << '\n';
}

}  // namespace bitext
