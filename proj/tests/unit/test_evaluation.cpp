#include <doctest.h>

#include <set>
#include <sstream>

#include "bitext/evaluation.hpp"
#include "fixtures.hpp"

using namespace bitext;

namespace {

std::vector<CandidatePair> pairs_with_scores(const std::vector<double>& scores) {
  std::vector<CandidatePair> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    CandidatePair p;
    p.src_id = "e" + std::to_string(i);
    p.tgt_id = "h" + std::to_string(i);
    p.tgt_lang = LanguageCode("hi");
    p.src_text = "english, \"quoted\" " + std::to_string(i);
    p.tgt_text = "हिंदी " + std::to_string(i);
    p.las = scores[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {
  TEST_CASE("band rules") {
    CHECK(classify_band(0.86, 0.75) == LasBand::definite_accept);
    CHECK(classify_band(0.75 + 0.1, 0.75) == LasBand::marginal_accept);
    CHECK(classify_band(0.80, 0.75) == LasBand::marginal_accept);
    CHECK(classify_band(0.75, 0.75) == LasBand::reject);
    CHECK(classify_band(0.75 - 0.1, 0.75) == LasBand::reject);
    CHECK_FALSE(classify_band(0.60, 0.75).has_value());
  }

  TEST_CASE("90 samples make 3 batches of 30") {
    Rng rng(1);
    std::vector<double> scores;
    for (int i = 0; i < 600; ++i) scores.push_back(0.65 + uniform_real(rng) * 0.35);
    const auto pool = pairs_with_scores(scores);
    SamplingOptions options;
    options.n_per_band = 30;
    options.seed = 5;
    SamplingReport report;
    const auto samples = stratified_sample(pool, options, &report);
    REQUIRE(samples.size() == 90);
    CHECK(report.batches == 3);
    std::map<std::size_t, int> per_batch;
    std::map<LasBand, int> per_band;
    std::set<std::string> ids;
    for (const auto& s : samples) {
      ++per_batch[s.batch_id];
      ++per_band[s.band];
      ids.insert(s.sample_id);
      CHECK(classify_band(s.pair.las, 0.75) == s.band);
    }
    CHECK(per_batch.size() == 3);
    for (const auto& [b, n] : per_batch) CHECK(n == 30);
    for (const auto& [b, n] : per_band) CHECK(n == 30);
    CHECK(ids.size() == 90);
    CHECK(report.warnings.empty());

    const auto again = stratified_sample(pool, options);
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(again[i].pair.src_id == samples[i].pair.src_id);
  }

  TEST_CASE("shortfall warns and samples everything") {
    const auto pool = pairs_with_scores({0.9, 0.9, 0.8, 0.7});
    SamplingOptions options;
    options.n_per_band = 5;
    SamplingReport report;
    const auto samples = stratified_sample(pool, options, &report);
    CHECK(samples.size() == 4);
    CHECK(report.warnings.size() == 3);
  }

  TEST_CASE("spearman") {
    CHECK(spearman({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
    CHECK_THROWS(spearman({1, 2}, {1, 2, 3}));
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (int i = 0; i < 40; ++i) {
        xs.push_back(static_cast<double>(uniform_index(rng, 6)));  // plenty of ties
        ys.push_back(uniform_real(rng));
      }
      CHECK(spearman(xs, ys) == doctest::Approx(testing::brute_force_spearman(xs, ys)).epsilon(1e-9));
    }
  }

  TEST_CASE("analysis of uniform fives") {
    const auto pool = pairs_with_scores({0.9, 0.95, 0.8, 0.82, 0.7, 0.72});
    SamplingOptions options;
    options.n_per_band = 2;
    const auto samples = stratified_sample(pool, options);
    std::vector<Annotation> annotations;
    for (const auto& s : samples) {
      annotations.push_back({s.sample_id, "a1", 5});
      annotations.push_back({s.sample_id, "a2", 5});
    }
    const auto report = analysis_report(samples, annotations);
    const auto& hi = report["languages"]["en-hi"];
    CHECK(hi["bands"]["definite_accept"]["mean"].get<double>() == 5.0);
    CHECK(hi["bands"]["reject"]["mean"].get<double>() == 5.0);
    CHECK(hi["bands"]["marginal_accept"]["accuracy"].get<double>() == doctest::Approx(1.0));
    CHECK(report["overall"]["all_accept"]["mean"].get<double>() == 5.0);
    CHECK_FALSE(render_analysis_table(report).empty());
  }

  TEST_CASE("agreement within one") {
    const auto pool = pairs_with_scores({0.9, 0.8, 0.7});
    SamplingOptions options;
    options.n_per_band = 1;
    const auto samples = stratified_sample(pool, options);
    std::vector<Annotation> annotations;
    for (const auto& s : samples) {
      annotations.push_back({s.sample_id, "a1", 4});
      annotations.push_back({s.sample_id, "a2", 5});
    }
    const auto report = analysis_report(samples, annotations);
    CHECK(report.dump().find("agreement") != std::string::npos);
    const auto& overall = report["overall"];
    for (const auto& [key, value] : overall.items()) {
      if (key.find("agreement") != std::string::npos && value.is_number()) CHECK(value.get<double>() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("CSV round trips") {
    const auto pool = pairs_with_scores({0.9, 0.8, 0.7, 0.91, 0.81, 0.71});
    SamplingOptions options;
    options.n_per_band = 2;
    options.id_prefix = "s";
    const auto samples = stratified_sample(pool, options);
    std::stringstream key;
    write_sample_key_csv(key, samples);
    const auto back = read_sample_key_csv(key);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].sample_id == samples[i].sample_id);
      CHECK(back[i].band == samples[i].band);
      CHECK(back[i].pair.src_text == samples[i].pair.src_text);
      CHECK(back[i].pair.las == samples[i].pair.las);
    }
    const std::vector<Annotation> ann{{"s0", "x", 3}, {"s1", "y, z", 0}};
    std::stringstream a;
    write_annotations_csv(a, ann);
    const auto ann_back = read_annotations_csv(a);
    REQUIRE(ann_back.size() == 2);
    CHECK(ann_back[1].annotator_id == "y, z");
    CHECK(ann_back[1].sts == 0);

    std::stringstream sheet;
    write_annotation_csv(sheet, samples);
    CHECK(sheet.str().find("las") == std::string::npos);  // annotators never see scores
  }

  TEST_CASE("csv quoting") {
    std::stringstream s;
    csv::write_row(s, {"a", "b,c", "d\"e", "line\nbreak"});
    std::vector<std::string> fields;
    REQUIRE(csv::read_row(s, fields));
    CHECK(fields == std::vector<std::string>{"a", "b,c", "d\"e", "line\nbreak"});
    CHECK_FALSE(csv::read_row(s, fields));
  }
}
