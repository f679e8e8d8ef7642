#include <doctest.h>

#include <cmath>
#include <fstream>

#include "bitext/embedding.hpp"
#include "bitext/error.hpp"
#include "fixtures.hpp"

using namespace bitext;
using testing::code_of;
using testing::TempDir;

namespace {

void write_raw_semb(const std::filesystem::path& path, std::uint32_t dim, std::uint64_t count,
                    const std::vector<float>& values, std::size_t ids) {
  std::ofstream out(path, std::ios::binary);
  out.write("SEMB", 4);
  const std::uint32_t version = 1;
  const std::uint8_t dtype = 0;
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(&dtype), 1);
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * 4));
  std::ofstream sidecar(default_ids_path(path));
  for (std::size_t i = 0; i < ids; ++i) sidecar << "s" << i << "\n";
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("normalize") {
    const std::vector<float> v{3.0F, 4.0F};
    const auto n = normalize(v);
    CHECK(n[0] == doctest::Approx(0.6));
    CHECK(n[1] == doctest::Approx(0.8));
    CHECK(normalize(n) == n);
    const std::vector<float> zero{0.0F, 0.0F};
    CHECK(code_of([&] { normalize(zero); }) == ErrorCode::ZeroVector);
  }

  TEST_CASE("cosine examples") {
    const std::vector<float> e1{1, 0};
    const std::vector<float> e2{0, 1};
    CHECK(cosine_similarity(e1, e1) == 1.0);
    CHECK(cosine_similarity(e1, e2) == 0.0);
    const std::vector<float> a{0.6F, 0.8F};
    const std::vector<float> b{0.8F, 0.6F};
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.96).epsilon(1e-7));
    const std::vector<float> three{1, 0, 0};
    CHECK(code_of([&] { dot(e1, three); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("cosine is symmetric and rotation invariant") {
    Rng rng(3);
    const std::size_t d = 6;
    for (int t = 0; t < 20; ++t) {
      const auto u = testing::random_unit(rng, d);
      const auto v = testing::random_unit(rng, d);
      CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(cosine_similarity(u, v) == cosine_similarity(v, u));
      // random orthonormal basis by Gram-Schmidt
      std::vector<std::vector<double>> q;
      while (q.size() < d) {
        const auto r = testing::random_unit(rng, d);
        std::vector<double> w(r.begin(), r.end());
        for (const auto& b : q) {
          double p = 0;
          for (std::size_t i = 0; i < d; ++i) p += w[i] * b[i];
          for (std::size_t i = 0; i < d; ++i) w[i] -= p * b[i];
        }
        double n = 0;
        for (const double x : w) n += x * x;
        n = std::sqrt(n);
        if (n < 1e-6) continue;
        for (auto& x : w) x /= n;
        q.push_back(w);
      }
      auto rotate = [&](const std::vector<float>& x) {
        std::vector<float> out(d);
        for (std::size_t i = 0; i < d; ++i) {
          double s = 0;
          for (std::size_t k = 0; k < d; ++k) s += q[i][k] * x[k];
          out[i] = static_cast<float>(s);
        }
        return out;
      };
      CHECK(cosine_similarity(rotate(u), rotate(v)) == doctest::Approx(cosine_similarity(u, v)).epsilon(1e-5));
    }
  }

  TEST_CASE("SEMB import of a hand-written file") {
    TempDir dir;
    const std::vector<float> values{1, 0, 0, 0, 0, 1, 0, 0};
    write_raw_semb(dir / "m.semb", 4, 2, values, 2);
    ImportReport report;
    const auto m = import_embeddings(dir / "m.semb", &report);
    CHECK(m.count() == 2);
    CHECK(m.dim() == 4);
    CHECK(m.id(1) == "s1");
    CHECK(report.renormalized == 0);
    CHECK(std::vector<float>(m.row(1).begin(), m.row(1).end()) == std::vector<float>{0, 1, 0, 0});
  }

  TEST_CASE("SEMB errors") {
    TempDir dir;
    write_raw_semb(dir / "short.semb", 4, 2, {1, 0, 0, 0}, 2);
    CHECK(code_of([&] { import_embeddings(dir / "short.semb"); }) == ErrorCode::TruncatedFile);
    write_raw_semb(dir / "ids.semb", 4, 2, {1, 0, 0, 0, 0, 1, 0, 0}, 1);
    CHECK(code_of([&] { import_embeddings(dir / "ids.semb"); }) == ErrorCode::FormatError);
    testing::write_text(dir / "bad.semb", "NOPE and more bytes here");
    testing::write_text(dir / "bad.semb.ids", "a\n");
    CHECK(code_of([&] { import_embeddings(dir / "bad.semb"); }) == ErrorCode::FormatError);
    CHECK(code_of([&] { import_embeddings(dir / "absent.semb"); }) == ErrorCode::Io);
  }

  TEST_CASE("unnormalized rows are renormalized and counted") {
    TempDir dir;
    write_raw_semb(dir / "m.semb", 2, 2, {3, 4, 0, 1}, 2);
    ImportReport report;
    const auto m = import_embeddings(dir / "m.semb", &report);
    CHECK(report.renormalized == 1);
    CHECK(m.row(0)[0] == doctest::Approx(0.6));
  }

  TEST_CASE("export then import is bit exact") {
    TempDir dir;
    Rng rng(9);
    EmbeddingMatrix m(16);
    for (int i = 0; i < 50; ++i) m.add("id-" + std::to_string(i), testing::random_unit(rng, 16));
    export_embeddings(m, dir / "x.semb");
    ImportReport report;
    const auto back = import_embeddings(dir / "x.semb", &report);
    CHECK(back == m);
    CHECK(report.renormalized == 0);
  }

  TEST_CASE("matrix bookkeeping") {
    EmbeddingMatrix m(2);
    m.add("a", std::vector<float>{1, 0});
    CHECK(code_of([&] { m.add("a", std::vector<float>{0, 1}); }) == ErrorCode::DuplicateId);
    CHECK(code_of([&] { m.add("b", std::vector<float>{0, 1, 0}); }) == ErrorCode::DimensionMismatch);
    m.add("b", std::vector<float>{0, 1});
    CHECK(*m.find("b") == 1);
    CHECK_FALSE(m.find("c"));
    const std::vector<std::size_t> rows{1};
    const auto s = m.select(rows);
    CHECK(s.count() == 1);
    CHECK(s.id(0) == "b");
  }

  TEST_CASE("fake encoder is deterministic and unit norm") {
    const auto a = testing::fake_embedding("hello", 32);
    const auto b = testing::fake_embedding("hello", 32);
    CHECK(a == b);
    CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(testing::fake_embedding("hello!", 32) != a);
  }
}
