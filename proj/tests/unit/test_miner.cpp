#include <doctest.h>

#include <cmath>
#include <set>

#include "bitext/error.hpp"
#include "bitext/miner.hpp"
#include "fixtures.hpp"

using namespace bitext;

namespace {

struct CorpusBuilder {
  MiningCorpus corpus;

  explicit CorpusBuilder(LanguageCode lang, std::size_t dim) {
    corpus.lang = std::move(lang);
    corpus.embeddings = EmbeddingMatrix(dim);
  }

  CorpusBuilder& add(const std::string& id, const std::vector<float>& v, const std::string& bucket = "*",
                     BucketKind kind = BucketKind::global) {
    SentenceRecord r;
    r.sent_id = id;
    r.doc_id = id;
    r.lang = corpus.lang;
    r.text = "text of " + id;
    r.bucket = {kind, bucket};
    corpus.sentences.push_back(r);
    corpus.embeddings.add(id, normalize(v));
    return *this;
  }
};

// unit vector in the plane of e0, e1 with cosine c to e0
std::vector<float> at_cosine(double c, std::size_t dim = 4) {
  std::vector<float> v(dim, 0.0F);
  v[0] = static_cast<float>(c);
  v[1] = static_cast<float>(std::sqrt(1.0 - c * c));
  return v;
}

std::vector<float> basis(std::size_t i, std::size_t dim = 4) {
  std::vector<float> v(dim, 0.0F);
  v[i] = 1.0F;
  return v;
}

std::set<std::pair<std::string, std::string>> id_pairs(const std::vector<CandidatePair>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) out.emplace(p.src_id, p.tgt_id);
  return out;
}

}  // namespace

TEST_SUITE("miner") {
  TEST_CASE("one alignment per target") {
    Rng rng(1);
    EmbeddingMatrix src(8);
    EmbeddingMatrix tgt(8);
    for (int i = 0; i < 7; ++i) src.add("s" + std::to_string(i), testing::random_unit(rng, 8));
    for (int i = 0; i < 5; ++i) tgt.add("t" + std::to_string(i), testing::random_unit(rng, 8));
    CHECK(align_bucket(src, tgt).size() == 5);
    CHECK(align_bucket(EmbeddingMatrix(8), tgt).empty());
  }

  TEST_CASE("an exact duplicate wins with score one") {
    Rng rng(2);
    EmbeddingMatrix src(8);
    EmbeddingMatrix tgt(8);
    for (int i = 0; i < 10; ++i) src.add("s" + std::to_string(i), testing::random_unit(rng, 8));
    tgt.add("t", src.row(6));
    const auto a = align_bucket(src, tgt);
    CHECK(a[0].src_row == 6);
    CHECK(a[0].las == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("3x3 bucket against hand cosines") {
    // src rows: e0, (e0+e1)/sqrt2, e2 ; tgt rows: e1, (e0+0.1 e2), e2+e1
    EmbeddingMatrix src(3);
    src.add("a", normalize(std::vector<float>{1, 0, 0}));
    src.add("b", normalize(std::vector<float>{1, 1, 0}));
    src.add("c", normalize(std::vector<float>{0, 0, 1}));
    EmbeddingMatrix tgt(3);
    tgt.add("x", normalize(std::vector<float>{0, 1, 0}));     // a 0, b .707, c 0
    tgt.add("y", normalize(std::vector<float>{1, 0, 0.1F}));  // a .995, b .704, c .0995
    tgt.add("z", normalize(std::vector<float>{0, 1, 2}));     // a 0, b .316, c .894
    const auto al = align_bucket(src, tgt);
    REQUIRE(al.size() == 3);
    CHECK(al[0].src_row == 1);
    CHECK(al[1].src_row == 0);
    CHECK(al[2].src_row == 2);
    CHECK(al[0].las == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(al[2].las == doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-6));
  }

  TEST_CASE("ties go to the lower source id") {
    EmbeddingMatrix src(2);
    src.add("b", std::vector<float>{1, 0});
    src.add("a", std::vector<float>{1, 0});
    EmbeddingMatrix tgt(2);
    tgt.add("t", std::vector<float>{1, 0});
    CHECK(src.id(align_bucket(src, tgt)[0].src_row) == "a");
  }

  TEST_CASE("align_bucket matches brute force on random data") {
    Rng rng(3);
    EmbeddingMatrix src(16);
    EmbeddingMatrix tgt(16);
    for (int i = 0; i < 300; ++i) src.add("s" + std::to_string(i), testing::random_unit(rng, 16));
    for (int i = 0; i < 200; ++i) tgt.add("t" + std::to_string(i), testing::random_unit(rng, 16));
    const auto al = align_bucket(src, tgt);
    for (std::size_t t = 0; t < tgt.count(); ++t) {
      double best = -2;
      std::size_t arg = 0;
      for (std::size_t s = 0; s < src.count(); ++s) {
        const double c = dot(src.row(s), tgt.row(t));
        if (c > best) best = c, arg = s;
      }
      CHECK(al[t].src_row == arg);
      CHECK(al[t].las == doctest::Approx(best).epsilon(1e-9));
    }
  }

  TEST_CASE("comparable threshold boundary") {
    CorpusBuilder src(english(), 4);
    src.add("s", basis(0), "2021-01", BucketKind::month);
    CorpusBuilder tgt(LanguageCode("hi"), 4);
    tgt.add("low", at_cosine(0.74), "2021-01", BucketKind::month);
    tgt.add("high", at_cosine(0.76), "2021-01", BucketKind::month);
    const auto r = mine_comparable(src.corpus, tgt.corpus, {});
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].tgt_id == "high");
    CHECK(r.pairs[0].bucket == "2021-01");
    CHECK(r.pairs[0].mode == MiningMode::comparable);
    REQUIRE(r.near_threshold.size() == 1);
    CHECK(r.near_threshold[0].tgt_id == "low");
    CHECK(r.report.accepted == 1);
    CHECK(r.report.below_threshold == 1);
  }

  TEST_CASE("months never mix") {
    CorpusBuilder src(english(), 4);
    src.add("jan", basis(0), "2021-01", BucketKind::month);
    src.add("feb", basis(1), "2021-02", BucketKind::month);
    CorpusBuilder tgt(LanguageCode("hi"), 4);
    tgt.add("t1", basis(1), "2021-01", BucketKind::month);  // twin sits in February
    tgt.add("t2", basis(1), "2021-03", BucketKind::month);  // no English that month
    MinerOptions options;
    options.near_margin = 1.0;
    const auto r = mine_comparable(src.corpus, tgt.corpus, options);
    CHECK(r.pairs.empty());
    REQUIRE(r.near_threshold.size() == 1);
    CHECK(r.near_threshold[0].src_id == "jan");
    CHECK(r.report.targets_without_sources == 1);
  }

  TEST_CASE("planted identical pairs in the same month") {
    Rng rng(4);
    CorpusBuilder src(english(), 32);
    CorpusBuilder tgt(LanguageCode("ta"), 32);
    for (int i = 0; i < 50; ++i) {
      const auto v = testing::random_unit(rng, 32);
      const std::string month = i % 2 ? "2020-05" : "2020-06";
      src.add("e" + std::to_string(i), v, month, BucketKind::month);
      tgt.add("x" + std::to_string(i), v, month, BucketKind::month);
    }
    const auto r = mine_comparable(src.corpus, tgt.corpus, {});
    REQUIRE(r.pairs.size() == 50);
    for (const auto& p : r.pairs) {
      CHECK(p.src_id.substr(1) == p.tgt_id.substr(1));
      CHECK(p.las == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("document pairs") {
    Rng rng(5);
    CorpusBuilder src(english(), 16);
    CorpusBuilder tgt(LanguageCode("hi"), 16);
    std::vector<std::vector<float>> vs;
    for (int i = 0; i < 10; ++i) vs.push_back(testing::random_unit(rng, 16));
    for (int i = 0; i < 10; ++i) {
      src.add("e" + std::to_string(i), vs[i], "doc", BucketKind::document_pair);
      tgt.add("h" + std::to_string(i), vs[i], "doc", BucketKind::document_pair);
    }
    src.add("lonely", testing::random_unit(rng, 16), "only-en", BucketKind::document_pair);
    const auto r = mine_docpair(src.corpus, tgt.corpus, {});
    CHECK(r.pairs.size() == 10);
    for (const auto& p : r.pairs) CHECK(p.las == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.report.unpaired_documents == 1);

    // shuffling either side leaves the pair set unchanged
    CorpusBuilder shuffled(LanguageCode("hi"), 16);
    std::vector<int> order{3, 7, 1, 9, 0, 5, 2, 8, 6, 4};
    for (const int i : order) shuffled.add("h" + std::to_string(i), vs[i], "doc", BucketKind::document_pair);
    CHECK(id_pairs(mine_docpair(src.corpus, shuffled.corpus, {}).pairs) == id_pairs(r.pairs));
  }

  TEST_CASE("monolingual re-scoring drops 0.79") {
    const auto corpus = testing::palette_corpus(2000, 16, 4, 6);
    CorpusBuilder src(english(), 16);
    for (std::size_t i = 0; i < corpus.count(); ++i) {
      src.add(corpus.id(i), std::vector<float>(corpus.row(i).begin(), corpus.row(i).end()));
    }
    IvfPqOptions io;
    io.nlist = 8;
    io.m = 4;
    io.residual = false;
    IvfPqIndex index(16, io);
    index.train(corpus);
    index.add(corpus);

    // targets at chosen exact cosine from source rows 0 and 1
    Rng rng(6);
    auto off = [&](std::size_t row, double c) {
      auto u = testing::random_unit(rng, 16);
      const auto s = corpus.row(row);
      const double p = dot(u, s);
      for (std::size_t d = 0; d < 16; ++d) u[d] -= static_cast<float>(p) * s[d];
      u = normalize(u);
      std::vector<float> v(16);
      for (std::size_t d = 0; d < 16; ++d) v[d] = static_cast<float>(c * s[d] + std::sqrt(1 - c * c) * u[d]);
      return v;
    };
    CorpusBuilder tgt(LanguageCode("hi"), 16);
    tgt.add("copy", std::vector<float>(corpus.row(0).begin(), corpus.row(0).end()));
    tgt.add("far", off(1, 0.79));
    MinerOptions options;
    options.nprobe = 8;
    const auto r = mine_monolingual(src.corpus, index, tgt.corpus, options);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].tgt_id == "copy");
    CHECK(r.pairs[0].src_id == corpus.id(0));
    CHECK(r.pairs[0].las == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.pairs[0].approx_score.has_value());
    CHECK(r.report.below_threshold == 1);
    if (!r.near_threshold.empty()) {
      CHECK(r.near_threshold[0].las < 0.8);
    }
  }

  TEST_CASE("monolingual on an empty index") {
    IvfPqOptions io;
    io.m = 4;
    IvfPqIndex index(16, io);
    CorpusBuilder src(english(), 16);
    CorpusBuilder tgt(LanguageCode("hi"), 16);
    tgt.add("t", basis(0, 16));
    bool thrown = false;
    try {
      mine_monolingual(src.corpus, index, tgt.corpus, {});
    } catch (const Error& e) {
      thrown = e.code() == ErrorCode::EmptyIndex;
    }
    CHECK(thrown);
  }

  TEST_CASE("invalid thresholds") {
    ThresholdPolicy p;
    p.comparable = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK(ThresholdPolicy{}.for_mode(MiningMode::monolingual) == 0.80);
    CHECK_THROWS_AS(ThresholdPolicy{}.for_mode(MiningMode::pivot), Error);
  }

  TEST_CASE("mining is deterministic") {
    Rng rng(7);
    CorpusBuilder src(english(), 16);
    CorpusBuilder tgt(LanguageCode("hi"), 16);
    for (int i = 0; i < 400; ++i) src.add("s" + std::to_string(i), testing::random_unit(rng, 16), std::to_string(i % 3));
    for (int i = 0; i < 300; ++i) tgt.add("t" + std::to_string(i), testing::random_unit(rng, 16), std::to_string(i % 3));
    MinerOptions options;
    options.thresholds.comparable = 0.5;
    const auto a = mine_comparable(src.corpus, tgt.corpus, options);
    const auto b = mine_comparable(src.corpus, tgt.corpus, options);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      CHECK(a.pairs[i].src_id == b.pairs[i].src_id);
      CHECK(a.pairs[i].las == b.pairs[i].las);
    }
  }
}
