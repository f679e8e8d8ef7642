#include <doctest.h>

#include <set>

#include "bitext/error.hpp"
#include "bitext/ivfpq_index.hpp"
#include "fixtures.hpp"

using namespace bitext;
using testing::code_of;
using testing::TempDir;

namespace {

IvfPqIndex small_index(const EmbeddingMatrix& base, std::size_t nlist, std::size_t m, bool residual = true) {
  IvfPqOptions options;
  options.nlist = nlist;
  options.m = m;
  options.residual = residual;
  IvfPqIndex index(base.dim(), options);
  index.train(base);
  index.add(base);
  return index;
}

}  // namespace

TEST_SUITE("ivfpq_index") {
  TEST_CASE("defaults") {
    CHECK(IvfPqIndex::default_nlist(100) == 16);
    CHECK(IvfPqIndex::default_nlist(10) == 10);
    CHECK(IvfPqIndex::default_nlist(1000000) == 1000);
    CHECK(IvfPqIndex::default_nprobe(16) == 1);
    CHECK(IvfPqIndex::default_nprobe(17) == 2);
    CHECK(IvfPqIndex::default_nprobe(1000) == 63);
  }

  TEST_CASE("every vector lands in exactly one list") {
    const auto data = testing::clustered_dataset(3000, 32, 20, 0, 0.5, 0.1, 2);
    const auto index = small_index(data.base, 20, 8);
    CHECK(index.size() == 3000);
    std::size_t total = 0;
    for (std::size_t l = 0; l < index.nlist(); ++l) total += index.list_size(l);
    CHECK(total == 3000);
    for (std::size_t i = 0; i < data.base.count(); i += 101) CHECK(index.list_of(data.base.id(i)) < index.nlist());
    CHECK(index.list_of("absent") == index.nlist());
  }

  TEST_CASE("duplicate ids are rejected") {
    const auto data = testing::clustered_dataset(1000, 16, 8, 0, 0.5, 0.1, 3);
    auto index = small_index(data.base, 8, 4);
    CHECK(code_of([&] { index.add(data.base.select(std::vector<std::size_t>{0})); }) == ErrorCode::DuplicateId);
    CHECK(index.size() == 1000);
  }

  TEST_CASE("a centroid probes its own list first") {
    const auto data = testing::clustered_dataset(2000, 16, 10, 0, 0.5, 0.1, 4);
    const auto index = small_index(data.base, 10, 4);
    const auto centroids = index.coarse_centroids();
    for (std::size_t l = 0; l < index.nlist(); ++l) {
      const auto order = index.probe_order(centroids.subspan(l * 16, 16), 3);
      REQUIRE(order.size() == 3);
      CHECK(order[0] == l);
    }
  }

  TEST_CASE("k larger than the index") {
    const auto data = testing::clustered_dataset(400, 16, 4, 0, 0.5, 0.1, 5);
    IvfPqOptions options;
    options.nlist = 4;
    options.m = 4;
    IvfPqIndex index(16, options);
    index.train(data.base);
    index.add(data.base.select(std::vector<std::size_t>{0, 1}));
    const auto hits = index.search(data.base.row(0), 4, 3);
    CHECK(hits.size() == 2);
  }

  TEST_CASE("empty and untrained") {
    IvfPqOptions plain;
    plain.m = 4;
    IvfPqIndex index(16, plain);
    const std::vector<float> q(16, 0.25F);
    CHECK(code_of([&] { index.search(q, 1, 1); }) == ErrorCode::EmptyIndex);
    const auto data = testing::clustered_dataset(10, 16, 2, 0, 0.5, 0.1, 5);
    IvfPqOptions options;
    options.nlist = 20;
    options.m = 4;
    IvfPqIndex big(16, options);
    CHECK(code_of([&] { big.train(data.base); }) == ErrorCode::InsufficientData);
  }

  TEST_CASE("save and load give identical answers") {
    TempDir dir;
    const auto data = testing::clustered_dataset(2000, 32, 16, 50, 0.5, 0.1, 6);
    const auto index = small_index(data.base, 16, 8);
    index.save(dir / "x.idx");
    const auto back = IvfPqIndex::load(dir / "x.idx");
    CHECK(back.size() == index.size());
    CHECK(back.nlist() == index.nlist());
    for (std::size_t q = 0; q < data.queries.count(); ++q) {
      CHECK(back.search(data.queries.row(q), 4, 5) == index.search(data.queries.row(q), 4, 5));
    }
    testing::write_text(dir / "bad.idx", "garbage");
    CHECK(code_of([&] { IvfPqIndex::load(dir / "bad.idx"); }) == ErrorCode::FormatError);
  }

  TEST_CASE("exact search is brute force") {
    const auto data = testing::clustered_dataset(500, 8, 5, 10, 0.5, 0.1, 7);
    for (std::size_t q = 0; q < data.queries.count(); ++q) {
      const auto hits = exact_search(data.base, data.queries.row(q), 5);
      REQUIRE(hits.size() == 5);
      std::vector<std::pair<double, std::string>> all;
      for (std::size_t i = 0; i < data.base.count(); ++i)
        all.emplace_back(-dot(data.base.row(i), data.queries.row(q)), data.base.id(i));
      std::sort(all.begin(), all.end());
      for (std::size_t r = 0; r < 5; ++r) {
        CHECK(hits[r].sent_id == all[r].second);
        CHECK(hits[r].score == doctest::Approx(-all[r].first).epsilon(1e-5));
      }
      // GEMM and scalar dot products may differ in the last bit
      const auto batch = exact_search_batch(data.base, data.queries.row(q), 5).front();
      REQUIRE(batch.size() == hits.size());
      for (std::size_t r = 0; r < hits.size(); ++r) {
        CHECK(batch[r].sent_id == hits[r].sent_id);
        CHECK(batch[r].score == doctest::Approx(hits[r].score).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("scores equal the inner product with the reconstruction") {
    for (const bool residual : {true, false}) {
      const auto data = testing::clustered_dataset(1500, 16, 8, 20, 0.5, 0.1, 8);
      const auto index = small_index(data.base, 8, 4, residual);
      for (std::size_t q = 0; q < data.queries.count(); ++q) {
        for (const auto& hit : index.search(data.queries.row(q), 8, 10)) {
          const auto rec = index.reconstruct(hit.sent_id);
          CHECK(hit.score == doctest::Approx(dot(rec, data.queries.row(q))).epsilon(1e-4));
        }
      }
    }
  }

  TEST_CASE("hits are sorted and results deterministic") {
    const auto data = testing::clustered_dataset(2000, 32, 16, 30, 0.5, 0.1, 9);
    const auto a = small_index(data.base, 16, 8);
    const auto b = small_index(data.base, 16, 8);
    const auto batch = a.search_batch(data.queries.values(), 4, 10);
    for (std::size_t q = 0; q < data.queries.count(); ++q) {
      const auto hits = a.search(data.queries.row(q), 4, 10);
      CHECK(hits == b.search(data.queries.row(q), 4, 10));
      CHECK(hits == batch[q]);
      for (std::size_t i = 1; i < hits.size(); ++i) {
        CHECK((hits[i - 1].score > hits[i].score ||
               (hits[i - 1].score == hits[i].score && hits[i - 1].sent_id < hits[i].sent_id)));
      }
    }
  }

  TEST_CASE("dimension checks") {
    const auto data = testing::clustered_dataset(500, 16, 4, 0, 0.5, 0.1, 10);
    const auto index = small_index(data.base, 4, 4);
    const std::vector<float> q(8, 0.1F);
    CHECK(code_of([&] { index.search(q, 1, 1); }) == ErrorCode::DimensionMismatch);
  }
}
