#include "bitext/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "bitext/error.hpp"
#include "bitext/evaluation.hpp"
#include "bitext/ingest.hpp"
#include "bitext/ivfpq_index.hpp"
#include "bitext/miner.hpp"
#include "bitext/refine.hpp"
#include "bitext/remote_embedder.hpp"
#include "bitext/rng.hpp"
#include "bitext/stats.hpp"

namespace bitext {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest:
      return "ingest";
    case Stage::embed:
      return "embed";
    case Stage::index:
      return "index";
    case Stage::mine:
      return "mine";
    case Stage::refine:
      return "refine";
    case Stage::pivot:
      return "pivot";
    case Stage::sample:
      return "sample";
  }
  return "ingest";
}

Stage parse_stage(std::string_view text) {
  for (const auto s : kStages) {
    if (text == to_string(s)) return s;
  }
  BITEXT_THROW(InvalidArgument, "unknown stage: " + std::string(text));
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path.string());
  std::uint64_t h = fnv1a64("");
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

namespace layout {
fs::path sentences(const fs::path& out, const LanguageCode& lang) {
  return out / "ingest" / (lang.str() + ".sentences.tsv");
}
fs::path fetched_embeddings(const fs::path& out, const LanguageCode& lang) {
  return out / "embed" / (lang.str() + ".semb");
}
fs::path index_file(const fs::path& out) { return out / "index" / "en.sivf"; }
fs::path mined_pairs(const fs::path& out, const LanguageCode& lang) {
  return out / "mine" / (pair_label(english(), lang) + ".pairs.tsv");
}
fs::path near_pairs(const fs::path& out, const LanguageCode& lang) {
  return out / "mine" / (pair_label(english(), lang) + ".near.tsv");
}
fs::path refined_pairs(const fs::path& out, const LanguageCode& lang) {
  return out / "refine" / (pair_label(english(), lang) + ".pairs.tsv");
}
fs::path pivot_pairs(const fs::path& out, const LanguageCode& a, const LanguageCode& b) {
  return out / "pivot" / (pair_label(a, b) + ".pairs.tsv");
}
fs::path annotation_csv(const fs::path& out) { return out / "sample" / "annotation.csv"; }
fs::path sample_key_csv(const fs::path& out) { return out / "sample" / "key.csv"; }
fs::path manifest(const fs::path& out) { return out / "manifest.json"; }
}  // namespace layout

namespace {

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    BITEXT_CHECK(out.good(), Io, "cannot open " + tmp.string() + " for writing");
    out << j.dump(2) << '\n';
    BITEXT_CHECK(out.good(), Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct StageOutput {
  std::vector<fs::path> outputs;
  json counts = json::object();
};

class Runner {
 public:
  Runner(const RunConfig& cfg, const PipelineOptions& options)
      : cfg_(cfg), options_(options), out_(cfg.out_dir) {}

  PipelineResult run() {
    fs::create_directories(out_);
    const json effective = cfg_.to_json();
    write_json(out_ / "effective_config.json", effective);
    manifest_ = load_manifest();
    manifest_["seed"] = cfg_.seed;
    manifest_["config_digest"] = format_hex(fnv1a64(effective.dump()));
    if (!manifest_.contains("stages")) manifest_["stages"] = json::object();
    set_worker_count(cfg_.workers);

    for (const auto stage : kStages) {
      run_stage(stage);
      if (options_.until && *options_.until == stage) break;
    }
    result_.manifest = manifest_;
    return result_;
  }

 private:
  static std::string format_hex(std::uint64_t h) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
  }

  json load_manifest() const {
    const auto path = layout::manifest(out_);
    if (!fs::exists(path)) return json{{"version", 1}};
    try {
      std::ifstream in(path, std::ios::binary);
      return json::parse(in);
    } catch (const json::exception&) {
      return json{{"version", 1}};
    }
  }

  void log(const std::string& line) const {
    if (options_.log) *options_.log << line << std::endl;
  }

  fs::path embeddings_path(const LanguageCode& lang) const {
    return cfg_.embeddings.provider == EmbeddingProvider::fetch ? layout::fetched_embeddings(out_, lang)
                                                                : cfg_.corpus(lang).embeddings;
  }

  std::vector<LanguageCode> languages() const {
    std::vector<LanguageCode> out{english()};
    for (const auto& l : cfg_.targets()) out.push_back(l);
    return out;
  }

  json digests(const std::vector<fs::path>& paths) const {
    json j = json::object();
    for (const auto& p : paths) j[p.string()] = file_digest(p);
    return j;
  }

  bool up_to_date(Stage stage, const json& params, const std::vector<fs::path>& inputs) const {
    const auto& stages = manifest_["stages"];
    const std::string name(to_string(stage));
    if (!stages.contains(name)) return false;
    const auto& entry = stages[name];
    if (entry.value("status", "") != "done" || entry["params"] != params) return false;
    try {
      if (entry["inputs"] != digests(inputs)) return false;
      for (const auto& [path, digest] : entry["outputs"].items()) {
        if (!fs::exists(path) || file_digest(path) != digest.get<std::string>()) return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  void save_manifest() const { write_json(layout::manifest(out_), manifest_); }

  void run_stage(Stage stage) {
    const std::string name(to_string(stage));
    json params;
    std::vector<fs::path> inputs;
    std::function<StageOutput()> body;
    switch (stage) {
      case Stage::ingest:
        plan_ingest(params, inputs, body);
        break;
      case Stage::embed:
        plan_embed(params, inputs, body);
        break;
      case Stage::index:
        plan_index(params, inputs, body);
        break;
      case Stage::mine:
        plan_mine(params, inputs, body);
        break;
      case Stage::refine:
        plan_refine(params, inputs, body);
        break;
      case Stage::pivot:
        plan_pivot(params, inputs, body);
        break;
      case Stage::sample:
        plan_sample(params, inputs, body);
        break;
    }
    params["seed"] = cfg_.seed;

    if (!options_.force && !rerun_rest_ && up_to_date(stage, params, inputs)) {
      log(name + ": up to date");
      result_.resumed.push_back(name);
      return;
    }
    rerun_rest_ = true;
    log(name + ": running");
    const auto started = std::chrono::steady_clock::now();
    try {
      json input_digests = digests(inputs);
      StageOutput out = body();
      manifest_["stages"][name] = {{"status", "done"},
                                   {"params", params},
                                   {"inputs", std::move(input_digests)},
                                   {"outputs", digests(out.outputs)},
                                   {"counts", out.counts}};
      save_manifest();
    } catch (const std::exception& e) {
      manifest_["stages"][name] = {{"status", "failed"}, {"params", params}, {"error", e.what()}};
      save_manifest();
      log(name + ": failed: " + e.what());
      BITEXT_THROW(StageFailure, "stage '" + name + "' failed: " + e.what());
    }
    result_.executed.push_back(name);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.2fs", seconds);
    log(name + ": done in " + elapsed);
  }

  BucketKind bucketing() const {
    switch (cfg_.mode) {
      case MiningMode::comparable:
        return BucketKind::month;
      case MiningMode::docpair:
        return BucketKind::document_pair;
      default:
        return BucketKind::global;
    }
  }

  void plan_ingest(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    params = {{"bucketing", to_string(bucketing())}, {"data_dir", cfg_.data_dir.string()}};
    for (const auto& lang : languages()) inputs.push_back(cfg_.corpus(lang).documents);
    body = [this] {
      StageOutput out;
      IngestOptions options;
      options.bucketing = bucketing();
      options.languages = cfg_.languages;
      options.data_dir = cfg_.data_dir;
      json report = json::object();
      for (const auto& lang : languages()) {
        std::ifstream in(cfg_.corpus(lang).documents, std::ios::binary);
        BITEXT_CHECK(in.good(), Io, "cannot open " + cfg_.corpus(lang).documents.string());
        IngestReport r;
        auto sentences = ingest_jsonl(in, options, r);
        std::size_t mislabeled = 0;
        std::erase_if(sentences, [&](const SentenceRecord& s) { return s.lang != lang && ++mislabeled; });
        BITEXT_CHECK(!sentences.empty(), InsufficientData, "no sentences ingested for " + lang.str());
        const auto path = layout::sentences(out_, lang);
        fs::create_directories(path.parent_path());
        write_sentences_tsv(path, sentences);
        out.outputs.push_back(path);
        report[lang.str()] = r.to_json();
        report[lang.str()]["wrong_language_sentences"] = mislabeled;
        out.counts[lang.str()] = sentences.size();
      }
      const auto report_path = out_ / "ingest" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  void plan_embed(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    if (cfg_.embeddings.provider == EmbeddingProvider::import_file) {
      json paths = json::object();
      for (const auto& lang : languages()) paths[lang.str()] = cfg_.corpus(lang).embeddings.string();
      params = {{"provider", "import"}, {"paths", paths}};
      body = [this, paths] {
        // imported files are read and checked by the index stage
        StageOutput out;
        const auto report_path = out_ / "embed" / "report.json";
        write_json(report_path, {{"provider", "import"}, {"paths", paths}});
        out.outputs.push_back(report_path);
        return out;
      };
      return;
    }
    params = {{"provider", "fetch"},
              {"endpoint", cfg_.embeddings.endpoint},
              {"batch_size", cfg_.embeddings.batch_size},
              {"max_attempts", cfg_.embeddings.max_attempts}};
    for (const auto& lang : languages()) inputs.push_back(layout::sentences(out_, lang));
    body = [this] {
      StageOutput out;
      RemoteEmbedderOptions options;
      options.endpoint = cfg_.embeddings.endpoint;
      options.batch_size = cfg_.embeddings.batch_size;
      options.concurrency = cfg_.embeddings.concurrency;
      options.max_attempts = cfg_.embeddings.max_attempts;
      json report = json::object();
      for (const auto& lang : languages()) {
        const auto sentences = read_sentences_tsv(layout::sentences(out_, lang));
        FetchReport r;
        const auto matrix = fetch_remote_embeddings(sentences, options, &r);
        const auto path = layout::fetched_embeddings(out_, lang);
        fs::create_directories(path.parent_path());
        export_embeddings(matrix, path);
        out.outputs.push_back(path);
        out.outputs.push_back(default_ids_path(path));
        report[lang.str()] = {{"rows", matrix.count()},
                              {"dim", matrix.dim()},
                              {"requests", r.requests},
                              {"retries", r.retries},
                              {"renormalized", r.renormalized}};
        out.counts[lang.str()] = matrix.count();
      }
      const auto report_path = out_ / "embed" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  std::vector<fs::path> embedding_inputs() const {
    std::vector<fs::path> paths;
    for (const auto& lang : languages()) {
      paths.push_back(embeddings_path(lang));
      paths.push_back(default_ids_path(embeddings_path(lang)));
    }
    return paths;
  }

  json index_params() const {
    return {{"mode", to_string(cfg_.mode)},
            {"nlist", cfg_.index.nlist},
            {"m", cfg_.index.m},
            {"residual", cfg_.index.residual},
            {"iterations", cfg_.index.iterations},
            {"max_points_per_centroid", cfg_.index.max_points_per_centroid}};
  }

  MiningCorpus load_corpus(const LanguageCode& lang, ImportReport* report) const {
    MiningCorpus corpus;
    corpus.lang = lang;
    corpus.sentences = read_sentences_tsv(layout::sentences(out_, lang));
    corpus.embeddings = import_embeddings(embeddings_path(lang), report);
    return corpus;
  }

  void plan_index(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    params = index_params();
    for (const auto& lang : languages()) inputs.push_back(layout::sentences(out_, lang));
    for (const auto& p : embedding_inputs()) inputs.push_back(p);
    body = [this] {
      StageOutput out;
      json report = json::object();
      std::size_t dim = 0;
      for (const auto& lang : languages()) {
        ImportReport r;
        const auto corpus = load_corpus(lang, &r);
        std::vector<std::size_t> rows;
        for (const auto& s : corpus.sentences) {
          if (const auto row = corpus.embeddings.find(s.sent_id)) rows.push_back(*row);
        }
        BITEXT_CHECK(!rows.empty(), InsufficientData,
                     "embeddings for " + lang.str() + " cover none of its " +
                         std::to_string(corpus.sentences.size()) + " sentences");
        BITEXT_CHECK(dim == 0 || dim == corpus.embeddings.dim(), DimensionMismatch,
                     "embedding dimension differs between languages");
        dim = corpus.embeddings.dim();
        report[lang.str()] = {{"rows", r.rows},
                              {"renormalized", r.renormalized},
                              {"sentences", corpus.sentences.size()},
                              {"missing_embeddings", corpus.sentences.size() - rows.size()}};
        out.counts[lang.str()] = rows.size();

        if (cfg_.mode == MiningMode::monolingual && lang == english()) {
          const auto vectors = corpus.embeddings.select(rows);
          IvfPqIndex index(vectors.dim(), cfg_.index.index_options(cfg_.seed));
          index.train(vectors);
          index.add(vectors);
          const auto path = layout::index_file(out_);
          fs::create_directories(path.parent_path());
          index.save(path);
          out.outputs.push_back(path);
          report["index"] = {{"vectors", index.size()}, {"nlist", index.nlist()}, {"m", index.quantizer().subspaces()}};
        }
      }
      const auto report_path = out_ / "index" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  void plan_mine(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    params = {{"mode", to_string(cfg_.mode)},
              {"thresholds", {cfg_.thresholds.comparable, cfg_.thresholds.docpair, cfg_.thresholds.monolingual}},
              {"nprobe", cfg_.index.nprobe},
              {"k", cfg_.index.k}};
    for (const auto& lang : languages()) inputs.push_back(layout::sentences(out_, lang));
    for (const auto& p : embedding_inputs()) inputs.push_back(p);
    if (cfg_.mode == MiningMode::monolingual) inputs.push_back(layout::index_file(out_));
    body = [this] {
      StageOutput out;
      MinerOptions options;
      options.thresholds = cfg_.thresholds;
      options.nprobe = cfg_.index.nprobe;
      options.k = cfg_.index.k;
      const auto src = load_corpus(english(), nullptr);
      std::optional<IvfPqIndex> index;
      if (cfg_.mode == MiningMode::monolingual) index = IvfPqIndex::load(layout::index_file(out_));

      json report = json::object();
      for (const auto& lang : cfg_.targets()) {
        const auto tgt = load_corpus(lang, nullptr);
        MiningResult result;
        switch (cfg_.mode) {
          case MiningMode::comparable:
            result = mine_comparable(src, tgt, options);
            break;
          case MiningMode::docpair:
            result = mine_docpair(src, tgt, options);
            break;
          default:
            result = mine_monolingual(src, *index, tgt, options);
            break;
        }
        const auto pairs_path = layout::mined_pairs(out_, lang);
        const auto near_path = layout::near_pairs(out_, lang);
        fs::create_directories(pairs_path.parent_path());
        write_pairs_tsv(pairs_path, result.pairs);
        write_pairs_tsv(near_path, result.near_threshold);
        out.outputs.push_back(pairs_path);
        out.outputs.push_back(near_path);
        report[pair_label(english(), lang)] = result.report.to_json();
        out.counts[pair_label(english(), lang)] = result.pairs.size();
      }
      const auto report_path = out_ / "mine" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  void plan_refine(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    params = {{"min_en_words", cfg_.filter.min_en_words},
              {"langid", cfg_.filter.langid_enabled},
              {"langid_hard_fail", cfg_.filter.langid_hard_fail},
              {"dedup", cfg_.filter.dedup_enabled},
              {"thresholds", {cfg_.thresholds.comparable, cfg_.thresholds.docpair, cfg_.thresholds.monolingual}},
              {"heldout_dir", cfg_.heldout_dir.string()},
              {"data_dir", cfg_.data_dir.string()}};
    for (const auto& lang : cfg_.targets()) inputs.push_back(layout::mined_pairs(out_, lang));
    if (!cfg_.heldout_dir.empty()) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(cfg_.heldout_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      inputs.insert(inputs.end(), files.begin(), files.end());
    }
    if (!cfg_.existing_counts.empty()) inputs.push_back(cfg_.existing_counts);
    body = [this] {
      StageOutput out;
      const TrigramLanguageDetector detector(cfg_.languages, cfg_.data_dir);
      std::vector<HeldOutSet> sets;
      if (!cfg_.heldout_dir.empty()) sets = load_heldout(cfg_.heldout_dir);
      std::map<std::string, std::uint64_t> existing;
      if (!cfg_.existing_counts.empty()) existing = read_counts_tsv(cfg_.existing_counts);

      json report = json::object();
      std::vector<PairCount> counts;
      for (const auto& lang : cfg_.targets()) {
        const auto label = pair_label(english(), lang);
        const auto mined = read_pairs_tsv(layout::mined_pairs(out_, lang), english(), lang);
        FilterReport fr;
        auto pairs = apply_filters(mined, cfg_.thresholds, cfg_.filter, &detector, fr);
        DecontaminationReport dr;
        if (!sets.empty()) {
          pairs = decontaminate(pairs, sets, &dr);
          fr.filters_applied.emplace_back("decontaminate");
        }
        const auto path = layout::refined_pairs(out_, lang);
        fs::create_directories(path.parent_path());
        write_pairs_tsv(path, pairs);
        out.outputs.push_back(path);
        report[label] = {{"filters", fr.to_json()}, {"decontamination", dr.to_json()}, {"output", pairs.size()}};
        out.counts[label] = pairs.size();
        const auto it = existing.find(label);
        counts.push_back({label, it == existing.end() ? 0 : it->second, pairs.size()});
      }
      const auto stats = compute_stats(counts);
      const auto report_path = out_ / "refine" / "report.json";
      const auto stats_path = out_ / "refine" / "stats.json";
      const auto table_path = out_ / "refine" / "stats.tsv";
      write_json(report_path, report);
      write_json(stats_path, stats.to_json());
      {
        std::ofstream table(table_path, std::ios::binary | std::ios::trunc);
        table << stats.render();
      }
      out.outputs.insert(out.outputs.end(), {report_path, stats_path, table_path});
      return out;
    };
  }

  void plan_pivot(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    const auto targets = cfg_.targets();
    const bool enabled = cfg_.pivot && targets.size() >= 2;
    params = {{"enabled", enabled}};
    if (enabled) {
      for (const auto& lang : targets) inputs.push_back(layout::refined_pairs(out_, lang));
    }
    body = [this, targets, enabled] {
      StageOutput out;
      json report = json::object();
      if (enabled) {
        std::map<LanguageCode, std::vector<CandidatePair>> refined;
        for (const auto& lang : targets) refined[lang] = read_pairs_tsv(layout::refined_pairs(out_, lang), english(), lang);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          for (std::size_t j = i + 1; j < targets.size(); ++j) {
            const auto label = pair_label(targets[i], targets[j]);
            PivotReport pr;
            const auto pairs =
                pivot_extract(refined[targets[i]], refined[targets[j]], derive_seed(cfg_.seed, label), &pr);
            const auto path = layout::pivot_pairs(out_, targets[i], targets[j]);
            fs::create_directories(path.parent_path());
            write_pairs_tsv(path, pairs);
            out.outputs.push_back(path);
            report[label] = pr.to_json();
            out.counts[label] = pairs.size();
          }
        }
      } else {
        report["skipped"] = cfg_.pivot ? "fewer than two non-English languages" : "disabled";
      }
      const auto report_path = out_ / "pivot" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  void plan_sample(json& params, std::vector<fs::path>& inputs, std::function<StageOutput()>& body) {
    params = {{"enabled", cfg_.sample.enabled},
              {"n_per_band", cfg_.sample.n_per_band},
              {"batch_size", cfg_.sample.batch_size},
              {"mode", to_string(cfg_.mode)},
              {"thresholds", {cfg_.thresholds.comparable, cfg_.thresholds.docpair, cfg_.thresholds.monolingual}}};
    if (cfg_.sample.enabled) {
      for (const auto& lang : cfg_.targets()) {
        inputs.push_back(layout::refined_pairs(out_, lang));
        inputs.push_back(layout::near_pairs(out_, lang));
      }
    }
    body = [this] {
      StageOutput out;
      json report = json::object();
      if (cfg_.sample.enabled) {
        std::vector<AnnotationSample> all;
        std::size_t batch_offset = 0;
        for (const auto& lang : cfg_.targets()) {
          auto pool = read_pairs_tsv(layout::refined_pairs(out_, lang), english(), lang);
          const auto near = read_pairs_tsv(layout::near_pairs(out_, lang), english(), lang);
          pool.insert(pool.end(), near.begin(), near.end());
          SamplingOptions options;
          options.threshold = cfg_.thresholds.for_mode(cfg_.mode);
          options.n_per_band = cfg_.sample.n_per_band;
          options.batch_size = cfg_.sample.batch_size;
          options.seed = derive_seed(cfg_.seed, "sample:" + lang.str());
          options.id_prefix = lang.str() + "-";
          SamplingReport sr;
          auto samples = stratified_sample(pool, options, &sr);
          for (auto& s : samples) s.batch_id += batch_offset;
          batch_offset += sr.batches;
          report[pair_label(english(), lang)] = sr.to_json();
          out.counts[pair_label(english(), lang)] = samples.size();
          all.insert(all.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
        }
        const auto csv_path = layout::annotation_csv(out_);
        const auto key_path = layout::sample_key_csv(out_);
        fs::create_directories(csv_path.parent_path());
        {
          std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
          write_annotation_csv(csv, all);
          std::ofstream key(key_path, std::ios::binary | std::ios::trunc);
          write_sample_key_csv(key, all);
          BITEXT_CHECK(csv.good() && key.good(), Io, "failed writing annotation files");
        }
        out.outputs.push_back(csv_path);
        out.outputs.push_back(key_path);
      } else {
        report["skipped"] = "disabled";
      }
      const auto report_path = out_ / "sample" / "report.json";
      write_json(report_path, report);
      out.outputs.push_back(report_path);
      return out;
    };
  }

  const RunConfig& cfg_;
  PipelineOptions options_;
  fs::path out_;
  json manifest_;
  PipelineResult result_;
  bool rerun_rest_ = false;
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options) {
  config.validate();
  Runner runner(config, options);
  return runner.run();
}

}  // namespace bitext
