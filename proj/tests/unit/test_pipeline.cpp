#include <doctest.h>

#include <sstream>

#include "bitext/error.hpp"
#include "bitext/pipeline.hpp"
#include "fixtures.hpp"

using namespace bitext;
using testing::TempDir;
namespace fs = std::filesystem;

namespace {

testing::PlantedRun small_run(const fs::path& dir) {
  testing::PlantedOptions o;
  o.planted = 150;
  o.distractors_per_side = 350;
  o.dim = 32;
  o.topics = 8;
  o.sentences_per_doc = 5;
  auto run = testing::build_planted_run(dir, o);
  auto j = nlohmann::json::parse(testing::read_text(run.config));
  j["index"] = {{"m", 8}, {"nlist", 16}, {"nprobe", 16}};
  j["filter"] = {{"min_en_words", 1}};
  j["sample"] = {{"n_per_band", 10}};
  testing::write_text(run.config, j.dump(2));
  return run;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("full run, resume, force and determinism") {
    TempDir dir;
    const auto run = small_run(dir.path());
    const auto cfg = RunConfig::load(run.config);
    std::ostringstream log;
    PipelineOptions options;
    options.log = &log;
    const auto first = run_pipeline(cfg, options);
    CHECK(first.resumed.empty());
    CHECK(first.executed.size() == std::size(kStages));
    for (const auto stage : kStages) {
      CHECK(first.manifest["stages"][std::string(to_string(stage))]["status"] == "done");
    }
    CHECK(fs::exists(layout::manifest(run.out_dir)));
    const auto refined = layout::refined_pairs(run.out_dir, LanguageCode("hi"));
    REQUIRE(fs::exists(refined));
    const std::string pairs_bytes = testing::read_text(refined);
    const auto refined_count = static_cast<std::size_t>(std::count(pairs_bytes.begin(), pairs_bytes.end(), '\n'));
    CHECK(refined_count == first.manifest["stages"]["refine"]["counts"]["en-hi"].get<std::size_t>());

    const auto second = run_pipeline(cfg, options);
    CHECK(second.executed.empty());
    CHECK(second.resumed.size() == std::size(kStages));

    PipelineOptions force = options;
    force.force = true;
    const auto third = run_pipeline(cfg, force);
    CHECK(third.executed.size() == std::size(kStages));
    CHECK(testing::read_text(refined) == pairs_bytes);

    TempDir other;
    const auto run2 = small_run(other.path());
    run_pipeline(RunConfig::load(run2.config));
    CHECK(testing::read_text(layout::refined_pairs(run2.out_dir, LanguageCode("hi"))) == pairs_bytes);
  }

  TEST_CASE("planted pairs are found") {
    TempDir dir;
    const auto run = small_run(dir.path());
    run_pipeline(RunConfig::load(run.config));
    const auto pairs = read_pairs_tsv(layout::mined_pairs(run.out_dir, LanguageCode("hi")), english(), LanguageCode("hi"));
    std::size_t hits = 0;
    for (const auto& p : pairs) hits += run.planted.contains({p.src_id, p.tgt_id});
    CHECK(hits == run.planted.size());
  }

  TEST_CASE("until stops early") {
    TempDir dir;
    const auto run = small_run(dir.path());
    PipelineOptions options;
    options.until = Stage::index;
    const auto r = run_pipeline(RunConfig::load(run.config), options);
    CHECK(r.executed == std::vector<std::string>{"ingest", "embed", "index"});
    CHECK_FALSE(fs::exists(layout::mined_pairs(run.out_dir, LanguageCode("hi"))));
  }

  TEST_CASE("a failing stage is recorded and earlier outputs stay") {
    TempDir dir;
    const auto run = small_run(dir.path());
    const auto cfg = RunConfig::load(run.config);
    fs::remove(cfg.corpus(english()).embeddings);
    bool failed = false;
    try {
      run_pipeline(cfg);
    } catch (const Error& e) {
      failed = e.code() == ErrorCode::StageFailure;
    }
    CHECK(failed);
    const auto manifest = nlohmann::json::parse(testing::read_text(layout::manifest(run.out_dir)));
    CHECK(manifest["stages"]["ingest"]["status"] == "done");
    // imported files are only read when the index is built
    CHECK(manifest["stages"]["embed"]["status"] == "done");
    CHECK(manifest["stages"]["index"]["status"] == "failed");
    CHECK(fs::exists(layout::sentences(run.out_dir, english())));
  }

  TEST_CASE("changing a parameter reruns from that stage") {
    TempDir dir;
    const auto run = small_run(dir.path());
    auto cfg = RunConfig::load(run.config);
    run_pipeline(cfg);
    cfg.filter.min_en_words = 3;
    const auto r = run_pipeline(cfg);
    CHECK(r.resumed == std::vector<std::string>{"ingest", "embed", "index", "mine"});
    CHECK(r.executed.front() == "refine");
  }

  TEST_CASE("stage names") {
    CHECK(parse_stage("mine") == Stage::mine);
    CHECK_THROWS_AS(parse_stage("fly"), Error);
  }
}
