// bitextmine: command-line front end for the mining toolkit.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a stage failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "bitext/config.hpp"
#include "bitext/embedding.hpp"
#include "bitext/error.hpp"
#include "bitext/evaluation.hpp"
#include "bitext/ingest.hpp"
#include "bitext/ivfpq_index.hpp"
#include "bitext/miner.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/refine.hpp"
#include "bitext/remote_embedder.hpp"
#include "bitext/stats.hpp"

namespace fs = std::filesystem;
using namespace bitext;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

void emit_json(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  BITEXT_CHECK(out.good(), Io, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  BITEXT_CHECK(out.good(), Io, "cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path);
  return in;
}

LanguageCode corpus_language(const std::vector<SentenceRecord>& sentences, const std::string& given) {
  if (!given.empty()) return LanguageCode(given);
  BITEXT_CHECK(!sentences.empty(), InvalidArgument, "cannot infer the language of an empty sentence file");
  return sentences.front().lang;
}

MiningCorpus load_corpus(const std::string& sentences, const std::string& embeddings, const std::string& lang) {
  MiningCorpus corpus;
  corpus.sentences = read_sentences_tsv(fs::path(sentences));
  corpus.lang = corpus_language(corpus.sentences, lang);
  corpus.embeddings = import_embeddings(embeddings);
  return corpus;
}

std::pair<LanguageCode, LanguageCode> pair_arg(const std::string& label) { return parse_pair_label(label); }

struct MineArgs {
  std::string src_sentences, src_embeddings, tgt_sentences, tgt_embeddings;
  std::string src_lang, tgt_lang;
  std::string out, near, report, index;
  double threshold = 0.0;
  std::size_t nprobe = 0;
  std::size_t k = 1;
};

void add_mine_options(CLI::App* cmd, MineArgs& a, double default_threshold) {
  a.threshold = default_threshold;
  cmd->add_option("--src-sentences", a.src_sentences, "English sentence TSV")->required();
  cmd->add_option("--src-embeddings", a.src_embeddings, "English SEMB file")->required();
  cmd->add_option("--tgt-sentences", a.tgt_sentences, "Target-language sentence TSV")->required();
  cmd->add_option("--tgt-embeddings", a.tgt_embeddings, "Target-language SEMB file")->required();
  cmd->add_option("--src-lang", a.src_lang, "Override the source language");
  cmd->add_option("--tgt-lang", a.tgt_lang, "Override the target language");
  cmd->add_option("--out", a.out, "Accepted pairs TSV")->required();
  cmd->add_option("--near", a.near, "Pairs just under the threshold, for annotation sampling");
  cmd->add_option("--report", a.report, "Mining report JSON (stdout when omitted)");
  cmd->add_option("--threshold", a.threshold, "LAS threshold")->capture_default_str();
}

void finish_mining(const MiningResult& result, const MineArgs& a) {
  write_pairs_tsv(fs::path(a.out), result.pairs);
  if (!a.near.empty()) write_pairs_tsv(fs::path(a.near), result.near_threshold);
  emit_json(result.report.to_json(), a.report);
}

bool is_config_error(ErrorCode code) {
  return code == ErrorCode::ConfigError || code == ErrorCode::InvalidArgument || code == ErrorCode::UnknownLanguage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel sentence mining toolkit"};
  app.require_subcommand(1);
  std::size_t workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 keeps the runtime default)");

  // ingest
  struct {
    std::string in, out, bucketing = "global", data_dir, report;
    std::vector<std::string> languages;
  } ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "Segment JSON-lines documents into a sentence TSV");
  ingest_cmd->add_option("--in", ingest_args.in, "Documents, one JSON object per line")->required();
  ingest_cmd->add_option("--out", ingest_args.out, "Sentence TSV")->required();
  ingest_cmd->add_option("--bucketing", ingest_args.bucketing, "global, month or document_pair")->capture_default_str();
  ingest_cmd->add_option("--languages", ingest_args.languages, "Accepted languages (default: en + 11 Indic)")
      ->delimiter(',');
  ingest_cmd->add_option("--data-dir", ingest_args.data_dir, "Overrides for the built-in prefix lists");
  ingest_cmd->add_option("--report", ingest_args.report, "Ingest report JSON (stdout when omitted)");

  // embed-import
  struct {
    std::string in, ids, out;
  } import_args;
  auto* import_cmd = app.add_subcommand("embed-import", "Validate a SEMB file, optionally writing a normalized copy");
  import_cmd->add_option("--in", import_args.in, "SEMB file")->required();
  import_cmd->add_option("--ids", import_args.ids, "Id sidecar (default <in>.ids)");
  import_cmd->add_option("--out", import_args.out, "Normalized copy");

  // embed-fetch
  struct {
    std::string sentences, endpoint, out;
    std::size_t batch_size = 64, concurrency = 1;
    int max_attempts = 4;
  } fetch_args;
  auto* fetch_cmd = app.add_subcommand("embed-fetch", "Embed a sentence TSV through an HTTP /embed provider");
  fetch_cmd->add_option("--sentences", fetch_args.sentences, "Sentence TSV")->required();
  fetch_cmd->add_option("--endpoint", fetch_args.endpoint, "Provider base URL, e.g. http://localhost:8080")
      ->required();
  fetch_cmd->add_option("--out", fetch_args.out, "SEMB output")->required();
  fetch_cmd->add_option("--batch-size", fetch_args.batch_size)->capture_default_str();
  fetch_cmd->add_option("--concurrency", fetch_args.concurrency)->capture_default_str();
  fetch_cmd->add_option("--max-attempts", fetch_args.max_attempts)->capture_default_str();

  // index-build
  struct {
    std::string embeddings, sentences, out;
    IndexConfig index;
    bool plain = false;
    std::uint64_t seed = 1234;
  } build_args;
  auto* build_cmd = app.add_subcommand("index-build", "Train and fill an IVF-PQ index");
  build_cmd->add_option("--embeddings", build_args.embeddings, "SEMB file")->required();
  build_cmd->add_option("--sentences", build_args.sentences, "Index only the ids in this sentence TSV");
  build_cmd->add_option("--out", build_args.out, "Index file")->required();
  build_cmd->add_option("--nlist", build_args.index.nlist, "Coarse clusters (0: scaled from n)")->capture_default_str();
  build_cmd->add_option("--m", build_args.index.m, "PQ subspaces")->capture_default_str();
  build_cmd->add_option("--iterations", build_args.index.iterations)->capture_default_str();
  build_cmd->add_flag("--plain", build_args.plain, "Quantize raw vectors instead of residuals");
  build_cmd->add_option("--seed", build_args.seed)->capture_default_str();

  // index-query
  struct {
    std::string index, queries, out, exact;
    std::size_t nprobe = 0, k = 1;
  } query_args;
  auto* query_cmd = app.add_subcommand("index-query", "Search an index with the rows of a SEMB file");
  query_cmd->add_option("--index", query_args.index, "Index file")->required();
  query_cmd->add_option("--queries", query_args.queries, "SEMB file of queries")->required();
  query_cmd->add_option("--nprobe", query_args.nprobe, "Lists probed (0: scaled from nlist)")->capture_default_str();
  query_cmd->add_option("--k", query_args.k, "Hits per query")->capture_default_str();
  query_cmd->add_option("--exact", query_args.exact, "Also report recall@1 against exhaustive search of this SEMB");
  query_cmd->add_option("--out", query_args.out, "Hits TSV: query_id, rank, sent_id, score (stdout when omitted)");

  // mining
  MineArgs comparable_args;
  MineArgs docpair_args;
  MineArgs mono_args;
  const ThresholdPolicy defaults;
  auto* comparable_cmd = app.add_subcommand("mine-comparable", "Align month-bucketed comparable corpora");
  add_mine_options(comparable_cmd, comparable_args, defaults.comparable);
  auto* docpair_cmd = app.add_subcommand("mine-docpair", "Align sentences of paired documents");
  add_mine_options(docpair_cmd, docpair_args, defaults.docpair);
  auto* mono_cmd = app.add_subcommand("mine-mono", "Retrieve through the index, then re-score exactly");
  add_mine_options(mono_cmd, mono_args, defaults.monolingual);
  mono_cmd->add_option("--index", mono_args.index, "Index over the English corpus")->required();
  mono_cmd->add_option("--nprobe", mono_args.nprobe, "Lists probed (0: scaled from nlist)")->capture_default_str();
  mono_cmd->add_option("--k", mono_args.k, "Hits re-scored per target")->capture_default_str();

  // refine
  struct {
    std::string in, pair, out, heldout, data_dir, report;
    FilterConfig filter;
    bool no_langid = false, no_dedup = false;
    ThresholdPolicy thresholds;
  } refine_args;
  auto* refine_cmd = app.add_subcommand("refine", "Threshold, length, language and duplicate filters");
  refine_cmd->add_option("--in", refine_args.in, "Pair TSV")->required();
  refine_cmd->add_option("--pair", refine_args.pair, "Language pair, e.g. en-hi")->required();
  refine_cmd->add_option("--out", refine_args.out, "Filtered pair TSV")->required();
  refine_cmd->add_option("--min-en-words", refine_args.filter.min_en_words)->capture_default_str();
  refine_cmd->add_flag("--no-langid", refine_args.no_langid, "Skip language identification");
  refine_cmd->add_flag("--langid-hard-fail", refine_args.filter.langid_hard_fail,
                       "Fail instead of skipping when the detector is unavailable");
  refine_cmd->add_flag("--no-dedup", refine_args.no_dedup, "Keep exact duplicates");
  refine_cmd->add_option("--heldout", refine_args.heldout, "Also decontaminate against this directory");
  refine_cmd->add_option("--data-dir", refine_args.data_dir, "Overrides for the language-id seed files");
  refine_cmd->add_option("--report", refine_args.report, "Filter report JSON (stdout when omitted)");

  // pivot
  struct {
    std::string a, a_pair, b, b_pair, out, report;
    std::uint64_t seed = 1234;
  } pivot_args;
  auto* pivot_cmd = app.add_subcommand("pivot", "Join two English-centric pair files on their English side");
  pivot_cmd->add_option("--a", pivot_args.a, "First pair TSV")->required();
  pivot_cmd->add_option("--a-pair", pivot_args.a_pair, "Its language pair, e.g. en-hi")->required();
  pivot_cmd->add_option("--b", pivot_args.b, "Second pair TSV")->required();
  pivot_cmd->add_option("--b-pair", pivot_args.b_pair, "Its language pair, e.g. en-ta")->required();
  pivot_cmd->add_option("--out", pivot_args.out, "Pivot pair TSV")->required();
  pivot_cmd->add_option("--seed", pivot_args.seed)->capture_default_str();
  pivot_cmd->add_option("--report", pivot_args.report, "Pivot report JSON (stdout when omitted)");

  // decontaminate
  struct {
    std::string in, pair, heldout, out, report;
  } decon_args;
  auto* decon_cmd = app.add_subcommand("decontaminate", "Remove pairs overlapping held-out evaluation sets");
  decon_cmd->add_option("--in", decon_args.in, "Pair TSV")->required();
  decon_cmd->add_option("--pair", decon_args.pair, "Language pair, e.g. en-hi")->required();
  decon_cmd->add_option("--heldout", decon_args.heldout, "Directory of <pair>.<side>.txt files")->required();
  decon_cmd->add_option("--out", decon_args.out, "Cleaned pair TSV")->required();
  decon_cmd->add_option("--report", decon_args.report, "Report JSON (stdout when omitted)");

  // sample-annotation
  struct {
    std::vector<std::string> in;
    std::string pair, out_csv, out_key, report;
    double threshold = 0.75;
    std::size_t n_per_band = 100, batch_size = 30;
    std::uint64_t seed = 1234;
  } sample_args;
  auto* sample_cmd = app.add_subcommand("sample-annotation", "Draw a band-stratified annotation sample");
  sample_cmd->add_option("--in", sample_args.in, "Pair TSVs (accepted and near-threshold)")->required();
  sample_cmd->add_option("--pair", sample_args.pair, "Language pair, e.g. en-hi")->required();
  sample_cmd->add_option("--threshold", sample_args.threshold)->capture_default_str();
  sample_cmd->add_option("--n-per-band", sample_args.n_per_band)->capture_default_str();
  sample_cmd->add_option("--batch-size", sample_args.batch_size)->capture_default_str();
  sample_cmd->add_option("--seed", sample_args.seed)->capture_default_str();
  sample_cmd->add_option("--out-csv", sample_args.out_csv, "Annotator-facing CSV")->required();
  sample_cmd->add_option("--out-key", sample_args.out_key, "Key CSV with bands and scores")->required();
  sample_cmd->add_option("--report", sample_args.report, "Sampling report JSON (stdout when omitted)");

  // analyze
  struct {
    std::string key, annotations, out;
  } analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize collected STS annotations");
  analyze_cmd->add_option("--key", analyze_args.key, "Key CSV from sample-annotation")->required();
  analyze_cmd->add_option("--annotations", analyze_args.annotations, "CSV of sample_id,annotator_id,sts")->required();
  analyze_cmd->add_option("--out", analyze_args.out, "Full report JSON");

  // stats
  struct {
    std::string existing, mined_counts, json_out;
    std::vector<std::string> mined;
  } stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus size table: existing, new, total, increase factor");
  stats_cmd->add_option("--existing", stats_args.existing, "TSV of pair and existing count");
  stats_cmd->add_option("--mined", stats_args.mined, "pair=path of a pair TSV, repeatable");
  stats_cmd->add_option("--mined-counts", stats_args.mined_counts, "TSV of pair and mined count");
  stats_cmd->add_option("--json", stats_args.json_out, "Also write the table as JSON");

  // run
  struct {
    std::string config, out, until;
    std::optional<std::uint64_t> seed;
    bool force = false;
  } run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline from a JSON config");
  run_cmd->add_option("--config", run_args.config, "Run configuration")->required();
  run_cmd->add_option("--out", run_args.out, "Override out_dir");
  run_cmd->add_option("--seed", run_args.seed, "Override seed");
  run_cmd->add_option("--until", run_args.until, "Stop after this stage");
  run_cmd->add_flag("--force", run_args.force, "Ignore the manifest and rerun every stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    set_worker_count(workers);

    if (*ingest_cmd) {
      IngestOptions options;
      options.bucketing = parse_bucket_kind(ingest_args.bucketing);
      if (!ingest_args.languages.empty()) options.languages = LanguageSet(ingest_args.languages);
      options.data_dir = ingest_args.data_dir;
      auto in = open_in(ingest_args.in);
      IngestReport report;
      const auto sentences = ingest_jsonl(in, options, report);
      write_sentences_tsv(fs::path(ingest_args.out), sentences);
      emit_json(report.to_json(), ingest_args.report);
    } else if (*import_cmd) {
      ImportReport report;
      const auto matrix = import_embeddings(import_args.in, &report, import_args.ids);
      if (!import_args.out.empty()) export_embeddings(matrix, import_args.out);
      emit_json({{"rows", report.rows}, {"dim", matrix.dim()}, {"renormalized", report.renormalized}}, "");
    } else if (*fetch_cmd) {
      RemoteEmbedderOptions options;
      options.endpoint = fetch_args.endpoint;
      options.batch_size = fetch_args.batch_size;
      options.concurrency = fetch_args.concurrency;
      options.max_attempts = fetch_args.max_attempts;
      FetchReport report;
      const auto matrix = fetch_remote_embeddings(read_sentences_tsv(fs::path(fetch_args.sentences)), options, &report);
      export_embeddings(matrix, fetch_args.out);
      emit_json({{"rows", matrix.count()},
                 {"dim", matrix.dim()},
                 {"requests", report.requests},
                 {"retries", report.retries},
                 {"renormalized", report.renormalized}},
                "");
    } else if (*build_cmd) {
      auto matrix = import_embeddings(build_args.embeddings);
      if (!build_args.sentences.empty()) {
        std::vector<std::size_t> rows;
        for (const auto& s : read_sentences_tsv(fs::path(build_args.sentences))) {
          if (const auto row = matrix.find(s.sent_id)) rows.push_back(*row);
        }
        matrix = matrix.select(rows);
      }
      build_args.index.residual = !build_args.plain;
      IvfPqIndex index(matrix.dim(), build_args.index.index_options(build_args.seed));
      index.train(matrix);
      index.add(matrix);
      index.save(build_args.out);
      emit_json({{"vectors", index.size()}, {"nlist", index.nlist()}, {"m", index.quantizer().subspaces()},
                 {"residual", index.residual()}},
                "");
    } else if (*query_cmd) {
      const auto index = IvfPqIndex::load(query_args.index);
      const auto queries = import_embeddings(query_args.queries);
      const std::size_t nprobe =
          query_args.nprobe > 0 ? query_args.nprobe : IvfPqIndex::default_nprobe(index.nlist());
      const auto hits = index.search_batch(queries.values(), nprobe, query_args.k);
      std::ofstream file;
      if (!query_args.out.empty()) file = open_out(query_args.out);
      std::ostream& out = query_args.out.empty() ? std::cout : file;
      for (std::size_t q = 0; q < hits.size(); ++q) {
        for (std::size_t r = 0; r < hits[q].size(); ++r) {
          out << queries.id(q) << '\t' << r + 1 << '\t' << hits[q][r].sent_id << '\t'
              << format_score(hits[q][r].score) << '\n';
        }
      }
      if (!query_args.exact.empty()) {
        const auto truth = exact_search_batch(import_embeddings(query_args.exact), queries.values(), 1);
        std::size_t found = 0;
        for (std::size_t q = 0; q < hits.size(); ++q) {
          if (!hits[q].empty() && hits[q][0].sent_id == truth[q][0].sent_id) ++found;
        }
        std::cerr << "recall@1 " << static_cast<double>(found) / static_cast<double>(std::max<std::size_t>(1, hits.size()))
                  << " (nprobe " << nprobe << ")\n";
      }
    } else if (*comparable_cmd || *docpair_cmd) {
      const auto& a = *comparable_cmd ? comparable_args : docpair_args;
      const auto src = load_corpus(a.src_sentences, a.src_embeddings, a.src_lang);
      const auto tgt = load_corpus(a.tgt_sentences, a.tgt_embeddings, a.tgt_lang);
      MinerOptions options;
      options.thresholds.comparable = a.threshold;
      options.thresholds.docpair = a.threshold;
      finish_mining(*comparable_cmd ? mine_comparable(src, tgt, options) : mine_docpair(src, tgt, options), a);
    } else if (*mono_cmd) {
      const auto src = load_corpus(mono_args.src_sentences, mono_args.src_embeddings, mono_args.src_lang);
      const auto tgt = load_corpus(mono_args.tgt_sentences, mono_args.tgt_embeddings, mono_args.tgt_lang);
      const auto index = IvfPqIndex::load(mono_args.index);
      MinerOptions options;
      options.thresholds.monolingual = mono_args.threshold;
      options.nprobe = mono_args.nprobe;
      options.k = mono_args.k;
      finish_mining(mine_monolingual(src, index, tgt, options), mono_args);
    } else if (*refine_cmd) {
      const auto [src_lang, tgt_lang] = pair_arg(refine_args.pair);
      auto filter = refine_args.filter;
      filter.langid_enabled = !refine_args.no_langid;
      filter.dedup_enabled = !refine_args.no_dedup;
      LanguageSet languages = LanguageSet::defaults();
      languages.add(src_lang);
      languages.add(tgt_lang);
      const TrigramLanguageDetector detector(languages, refine_args.data_dir);
      FilterReport report;
      auto pairs = apply_filters(read_pairs_tsv(fs::path(refine_args.in), src_lang, tgt_lang),
                                 refine_args.thresholds, filter, &detector, report);
      json j = report.to_json();
      if (!refine_args.heldout.empty()) {
        DecontaminationReport dr;
        pairs = decontaminate(pairs, load_heldout(refine_args.heldout), &dr);
        j["decontamination"] = dr.to_json();
      }
      write_pairs_tsv(fs::path(refine_args.out), pairs);
      emit_json(j, refine_args.report);
    } else if (*pivot_cmd) {
      const auto [a_src, a_tgt] = pair_arg(pivot_args.a_pair);
      const auto [b_src, b_tgt] = pair_arg(pivot_args.b_pair);
      PivotReport report;
      const auto pairs = pivot_extract(read_pairs_tsv(fs::path(pivot_args.a), a_src, a_tgt),
                                       read_pairs_tsv(fs::path(pivot_args.b), b_src, b_tgt), pivot_args.seed, &report);
      write_pairs_tsv(fs::path(pivot_args.out), pairs);
      emit_json(report.to_json(), pivot_args.report);
    } else if (*decon_cmd) {
      const auto [src_lang, tgt_lang] = pair_arg(decon_args.pair);
      DecontaminationReport report;
      const auto pairs = decontaminate(read_pairs_tsv(fs::path(decon_args.in), src_lang, tgt_lang),
                                       load_heldout(decon_args.heldout), &report);
      write_pairs_tsv(fs::path(decon_args.out), pairs);
      emit_json(report.to_json(), decon_args.report);
    } else if (*sample_cmd) {
      const auto [src_lang, tgt_lang] = pair_arg(sample_args.pair);
      std::vector<CandidatePair> pool;
      for (const auto& path : sample_args.in) {
        auto pairs = read_pairs_tsv(fs::path(path), src_lang, tgt_lang);
        pool.insert(pool.end(), pairs.begin(), pairs.end());
      }
      SamplingOptions options;
      options.threshold = sample_args.threshold;
      options.n_per_band = sample_args.n_per_band;
      options.batch_size = sample_args.batch_size;
      options.seed = sample_args.seed;
      SamplingReport report;
      const auto samples = stratified_sample(pool, options, &report);
      auto csv = open_out(sample_args.out_csv);
      write_annotation_csv(csv, samples);
      auto key = open_out(sample_args.out_key);
      write_sample_key_csv(key, samples);
      emit_json(report.to_json(), sample_args.report);
    } else if (*analyze_cmd) {
      auto key = open_in(analyze_args.key);
      auto annotations = open_in(analyze_args.annotations);
      const auto report = analysis_report(read_sample_key_csv(key), read_annotations_csv(annotations));
      std::cout << render_analysis_table(report);
      if (!analyze_args.out.empty()) emit_json(report, analyze_args.out);
    } else if (*stats_cmd) {
      std::map<std::string, std::uint64_t> existing;
      if (!stats_args.existing.empty()) existing = read_counts_tsv(fs::path(stats_args.existing));
      std::map<std::string, std::uint64_t> mined;
      if (!stats_args.mined_counts.empty()) mined = read_counts_tsv(fs::path(stats_args.mined_counts));
      for (const auto& entry : stats_args.mined) {
        const auto eq = entry.find('=');
        BITEXT_CHECK(eq != std::string::npos, InvalidArgument, "--mined expects pair=path, got " + entry);
        mined[entry.substr(0, eq)] = count_pairs_file(entry.substr(eq + 1));
      }
      std::set<std::string> labels;
      for (const auto& [k, v] : existing) labels.insert(k);
      for (const auto& [k, v] : mined) labels.insert(k);
      std::vector<PairCount> counts;
      for (const auto& label : labels) {
        counts.push_back({label, existing.contains(label) ? existing[label] : 0,
                          mined.contains(label) ? mined[label] : 0});
      }
      const auto stats = compute_stats(counts);
      std::cout << stats.render();
      if (!stats_args.json_out.empty()) emit_json(stats.to_json(), stats_args.json_out);
    } else if (*run_cmd) {
      auto config = RunConfig::load(run_args.config);
      if (!run_args.out.empty()) config.out_dir = fs::absolute(run_args.out);
      if (run_args.seed) config.seed = *run_args.seed;
      if (workers > 0) config.workers = workers;
      PipelineOptions options;
      options.force = run_args.force;
      options.log = &std::cerr;
      if (!run_args.until.empty()) {
        try {
          options.until = parse_stage(run_args.until);
        } catch (const Error& e) {
          BITEXT_THROW(ConfigError, e.what());
        }
      }
      const auto result = run_pipeline(config, options);
      emit_json({{"executed", result.executed}, {"resumed", result.resumed}}, "");
    }
  } catch (const Error& e) {
    std::cerr << "bitextmine: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "bitextmine: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
