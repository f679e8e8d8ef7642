#include "bitext/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <omp.h>

#include "bitext/error.hpp"

namespace bitext {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    BITEXT_CHECK(j.is_object(), ConfigError, path_ + " must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      BITEXT_CHECK(seen_.contains(key), ConfigError, "unknown setting " + path_ + "." + key);
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      BITEXT_THROW(ConfigError, path_ + "." + key + ": " + e.what());
    }
  }

  void path(const std::string& key, fs::path& out, const fs::path& base) {
    std::string value;
    get(key, value);
    if (!value.empty()) out = resolve(value, base);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  static fs::path resolve(const std::string& value, const fs::path& base) {
    fs::path p(value);
    return p.is_absolute() || base.empty() ? p : base / p;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T>
void require_positive(T value, const std::string& what) {
  BITEXT_CHECK(value > 0, ConfigError, what + " must be positive");
}

}  // namespace

IvfPqOptions IndexConfig::index_options(std::uint64_t seed) const {
  IvfPqOptions o;
  o.nlist = nlist;
  o.m = m;
  o.residual = residual;
  o.kmeans.iterations = iterations;
  o.kmeans.seed = seed;
  o.kmeans.max_points_per_centroid = max_points_per_centroid;
  return o;
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  RunConfig cfg;
  try {
    Section root(j, "config");
    std::vector<std::string> languages{"en"};
    root.get("languages", languages);
    cfg.languages = LanguageSet(languages);
    cfg.languages.add(english());
    root.get("seed", cfg.seed);
    root.get("workers", cfg.workers);
    root.path("out_dir", cfg.out_dir, base_dir);
    if (cfg.out_dir.is_relative() && !base_dir.empty()) cfg.out_dir = base_dir / cfg.out_dir;
    root.path("data_dir", cfg.data_dir, base_dir);
    root.path("heldout_dir", cfg.heldout_dir, base_dir);
    root.path("existing_counts", cfg.existing_counts, base_dir);
    root.get("pivot", cfg.pivot);

    if (root.has("mining")) {
      Section s(root.at("mining"), "mining");
      std::string mode(to_string(cfg.mode));
      s.get("mode", mode);
      try {
        cfg.mode = parse_mining_mode(mode);
      } catch (const Error& e) {
        BITEXT_THROW(ConfigError, e.what());
      }
      BITEXT_CHECK(cfg.mode != MiningMode::pivot, ConfigError, "mining.mode cannot be pivot");
    }
    if (root.has("thresholds")) {
      Section s(root.at("thresholds"), "thresholds");
      s.get("comparable", cfg.thresholds.comparable);
      s.get("docpair", cfg.thresholds.docpair);
      s.get("monolingual", cfg.thresholds.monolingual);
    }
    if (root.has("index")) {
      Section s(root.at("index"), "index");
      s.get("nlist", cfg.index.nlist);
      s.get("m", cfg.index.m);
      s.get("nprobe", cfg.index.nprobe);
      s.get("k", cfg.index.k);
      s.get("residual", cfg.index.residual);
      s.get("iterations", cfg.index.iterations);
      s.get("max_points_per_centroid", cfg.index.max_points_per_centroid);
    }
    if (root.has("filter")) {
      Section s(root.at("filter"), "filter");
      s.get("min_en_words", cfg.filter.min_en_words);
      s.get("langid", cfg.filter.langid_enabled);
      s.get("langid_hard_fail", cfg.filter.langid_hard_fail);
      s.get("dedup", cfg.filter.dedup_enabled);
    }
    if (root.has("embeddings")) {
      Section s(root.at("embeddings"), "embeddings");
      std::string provider = "import";
      s.get("provider", provider);
      BITEXT_CHECK(provider == "import" || provider == "fetch", ConfigError,
                   "embeddings.provider must be import or fetch, got " + provider);
      cfg.embeddings.provider = provider == "import" ? EmbeddingProvider::import_file : EmbeddingProvider::fetch;
      s.get("endpoint", cfg.embeddings.endpoint);
      s.get("batch_size", cfg.embeddings.batch_size);
      s.get("concurrency", cfg.embeddings.concurrency);
      s.get("max_attempts", cfg.embeddings.max_attempts);
    }
    if (root.has("sample")) {
      Section s(root.at("sample"), "sample");
      s.get("enabled", cfg.sample.enabled);
      s.get("n_per_band", cfg.sample.n_per_band);
      s.get("batch_size", cfg.sample.batch_size);
    }
    if (root.has("corpora")) {
      const auto& list = root.at("corpora");
      BITEXT_CHECK(list.is_array(), ConfigError, "corpora must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        Section s(list[i], "corpora[" + std::to_string(i) + "]");
        std::string lang;
        s.get("lang", lang);
        BITEXT_CHECK(!lang.empty(), ConfigError, s.where("lang") + " is required");
        CorpusConfig corpus;
        corpus.lang = cfg.languages.require(lang);
        s.path("documents", corpus.documents, base_dir);
        s.path("embeddings", corpus.embeddings, base_dir);
        cfg.corpora.push_back(std::move(corpus));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    BITEXT_THROW(ConfigError, e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), ConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    BITEXT_THROW(ConfigError, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

json RunConfig::to_json() const {
  json j;
  std::vector<std::string> langs;
  for (const auto& l : languages.codes()) langs.push_back(l.str());
  j["languages"] = langs;
  j["seed"] = seed;
  j["workers"] = workers;
  j["out_dir"] = out_dir.string();
  j["data_dir"] = data_dir.string();
  j["heldout_dir"] = heldout_dir.string();
  j["existing_counts"] = existing_counts.string();
  j["pivot"] = pivot;
  j["mining"] = {{"mode", to_string(mode)}};
  j["thresholds"] = {{"comparable", thresholds.comparable},
                     {"docpair", thresholds.docpair},
                     {"monolingual", thresholds.monolingual}};
  j["index"] = {{"nlist", index.nlist},
                {"m", index.m},
                {"nprobe", index.nprobe},
                {"k", index.k},
                {"residual", index.residual},
                {"iterations", index.iterations},
                {"max_points_per_centroid", index.max_points_per_centroid}};
  j["filter"] = {{"min_en_words", filter.min_en_words},
                 {"langid", filter.langid_enabled},
                 {"langid_hard_fail", filter.langid_hard_fail},
                 {"dedup", filter.dedup_enabled}};
  j["embeddings"] = {{"provider", embeddings.provider == EmbeddingProvider::import_file ? "import" : "fetch"},
                     {"endpoint", embeddings.endpoint},
                     {"batch_size", embeddings.batch_size},
                     {"concurrency", embeddings.concurrency},
                     {"max_attempts", embeddings.max_attempts}};
  j["sample"] = {{"enabled", sample.enabled}, {"n_per_band", sample.n_per_band}, {"batch_size", sample.batch_size}};
  j["corpora"] = json::array();
  for (const auto& c : corpora) {
    j["corpora"].push_back(
        {{"lang", c.lang.str()}, {"documents", c.documents.string()}, {"embeddings", c.embeddings.string()}});
  }
  return j;
}

void RunConfig::validate() const {
  try {
    thresholds.validate();
    filter.validate();
  } catch (const Error& e) {
    BITEXT_THROW(ConfigError, e.what());
  }
  require_positive(index.m, "index.m");
  require_positive(index.k, "index.k");
  require_positive(index.iterations, "index.iterations");
  require_positive(embeddings.batch_size, "embeddings.batch_size");
  require_positive(embeddings.concurrency, "embeddings.concurrency");
  require_positive(embeddings.max_attempts, "embeddings.max_attempts");
  require_positive(sample.batch_size, "sample.batch_size");
  BITEXT_CHECK(!out_dir.empty(), ConfigError, "out_dir is required");

  std::set<LanguageCode> seen;
  bool has_english = false;
  for (const auto& c : corpora) {
    BITEXT_CHECK(seen.insert(c.lang).second, ConfigError, "two corpora for language " + c.lang.str());
    has_english = has_english || c.lang == english();
    BITEXT_CHECK(!c.documents.empty(), ConfigError, "corpus " + c.lang.str() + " needs a documents file");
    BITEXT_CHECK(fs::is_regular_file(c.documents), ConfigError,
                 "documents file not found: " + c.documents.string());
    if (embeddings.provider == EmbeddingProvider::import_file) {
      BITEXT_CHECK(!c.embeddings.empty(), ConfigError,
                   "corpus " + c.lang.str() + " needs an embeddings path when embeddings are imported");
    }
  }
  BITEXT_CHECK(has_english, ConfigError, "an en corpus is required");
  BITEXT_CHECK(corpora.size() >= 2, ConfigError, "at least one non-English corpus is required");
  if (embeddings.provider == EmbeddingProvider::fetch) {
    BITEXT_CHECK(!embeddings.endpoint.empty(), ConfigError, "embeddings.endpoint is required for fetch");
  }
  if (!data_dir.empty()) {
    BITEXT_CHECK(fs::is_directory(data_dir), ConfigError, "data_dir not found: " + data_dir.string());
  }
  if (!heldout_dir.empty()) {
    BITEXT_CHECK(fs::is_directory(heldout_dir), ConfigError, "heldout_dir not found: " + heldout_dir.string());
  }
  if (!existing_counts.empty()) {
    BITEXT_CHECK(fs::is_regular_file(existing_counts), ConfigError,
                 "existing_counts not found: " + existing_counts.string());
  }
}

const CorpusConfig& RunConfig::corpus(const LanguageCode& lang) const {
  for (const auto& c : corpora) {
    if (c.lang == lang) return c;
  }
  BITEXT_THROW(ConfigError, "no corpus for language " + lang.str());
}

std::vector<LanguageCode> RunConfig::targets() const {
  std::vector<LanguageCode> out;
  for (const auto& c : corpora) {
    if (c.lang != english()) out.push_back(c.lang);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void set_worker_count(std::size_t workers) {
  if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
}

}  // namespace bitext
