#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "bitext/ingest.hpp"
#include "bitext/resources.hpp"
#include "bitext/segmenter.hpp"
#include "bitext/unicode.hpp"

namespace bitext::testing {

namespace fs = std::filesystem;

TempDir::TempDir(std::string_view tag) {
  static std::uint64_t counter = 0;
  Rng rng(std::random_device{}());
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() /
                     (std::string(tag) + "-" + std::to_string(rng() % 1000000000ULL) + "-" + std::to_string(counter++));
    if (fs::create_directories(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<float> random_unit(Rng& rng, std::size_t dim) {
  std::vector<float> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = static_cast<float>(standard_normal(rng));
      norm += static_cast<double>(x) * x;
    }
  } while (norm == 0.0);
  normalize_in_place(v);
  return v;
}

std::vector<float> fake_embedding(std::string_view text, std::size_t dim, std::uint64_t seed) {
  Rng rng(splitmix64(fnv1a64(text) ^ seed));
  return random_unit(rng, dim);
}

std::vector<float> perturb(std::span<const float> v, double scale, Rng& rng) {
  const auto u = random_unit(rng, v.size());
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] + scale * u[i]);
  normalize_in_place(out);
  return out;
}

EmbeddingMatrix matrix_from_rows(const std::vector<std::vector<float>>& rows, std::string_view id_prefix) {
  EmbeddingMatrix m(rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.add(std::string(id_prefix) + std::to_string(i), rows[i]);
  return m;
}

ClusteredData clustered_dataset(std::size_t n, std::size_t dim, std::size_t clusters, std::size_t n_queries,
                                double spread, double query_noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<float>> centers(clusters);
  for (auto& c : centers) c = random_unit(rng, dim);
  ClusteredData data{EmbeddingMatrix(dim), EmbeddingMatrix(dim)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[uniform_index(rng, clusters)];
    data.base.add("b" + std::to_string(i), perturb(c, spread, rng));
  }
  for (std::size_t q = 0; q < n_queries; ++q) {
    const auto row = data.base.row(uniform_index(rng, n));
    data.queries.add("q" + std::to_string(q), perturb(row, query_noise, rng));
  }
  return data;
}

EmbeddingMatrix palette_corpus(std::size_t n, std::size_t dim, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t sub = dim / m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<std::vector<float>> palette(m * 256);
  for (auto& entry : palette) {
    entry = random_unit(rng, sub);
    for (auto& x : entry) x = static_cast<float>(x * scale);
  }
  std::vector<std::vector<std::size_t>> order(m);
  for (auto& o : order) {
    o.resize(256);
    for (std::size_t c = 0; c < 256; ++c) o[c] = c;
    shuffle(o, rng);
  }
  EmbeddingMatrix out(dim);
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t c = i < 256 ? order[j][i] : uniform_index(rng, 256);
      std::copy(palette[j * 256 + c].begin(), palette[j * 256 + c].end(), row.begin() + j * sub);
    }
    out.add("p" + std::to_string(i), row);
  }
  return out;
}

std::vector<std::string> vocabulary(const LanguageCode& lang) {
  const auto text = resources::load("langid/" + lang.str() + ".txt");
  if (!text) throw std::runtime_error("no seed text for " + lang.str());
  const auto prefixes = PrefixTable::parse(resources::load("nonbreaking_prefixes/" + lang.str() + ".txt").value_or(""));
  std::set<std::string> words;
  std::istringstream in(*text);
  std::string token;
  while (in >> token) {
    std::string word;
    std::size_t pos = 0;
    std::size_t letters = 0;
    while (pos < token.size()) {
      const char32_t cp = unicode::next(token, pos);
      if (unicode::is_alpha(cp) || unicode::is_mark(cp)) {
        unicode::append(word, unicode::to_lower(cp));
        ++letters;
      }
    }
    if (letters < 3) continue;
    std::string upper = word;
    upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
    if (prefixes.always.contains(word) || prefixes.always.contains(upper) || prefixes.numeric_only.contains(word) ||
        prefixes.numeric_only.contains(upper)) {
      continue;
    }
    words.insert(word);
  }
  return {words.begin(), words.end()};
}

std::string random_sentence(const std::vector<std::string>& vocab, std::size_t words, const LanguageCode& lang,
                            Rng& rng) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    std::string w = vocab[uniform_index(rng, vocab.size())];
    if (i == 0 && !w.empty() && static_cast<unsigned char>(w[0]) < 0x80) {
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    }
    if (i > 0) out += ' ';
    out += w;
  }
  out += native_script(lang) == unicode::Script::Latin ? "." : "\xE0\xA5\xA4";  // U+0964 danda
  return out;
}

namespace {

struct SideBuilder {
  LanguageCode lang;
  std::vector<std::string> texts;
  std::vector<std::vector<float>> vectors;
  std::unordered_set<std::string> seen;

  std::string fresh_text(const std::vector<std::string>& vocab, Rng& rng) {
    for (;;) {
      auto t = random_sentence(vocab, 6 + uniform_index(rng, 5), lang, rng);
      if (seen.insert(t).second) return t;
    }
  }
};

// Shuffles the sentences into documents, ingests them and returns the
// embedding matrix keyed by the resulting sent_ids, plus text -> sent_id.
EmbeddingMatrix write_side(const fs::path& dir, SideBuilder& side, const PlantedOptions& options, Rng& rng,
                           std::unordered_map<std::string, std::string>& id_of) {
  std::vector<std::size_t> order(side.texts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);

  std::vector<SourceDocument> docs;
  std::ofstream jsonl(dir / (side.lang.str() + ".docs.jsonl"), std::ios::binary | std::ios::trunc);
  for (std::size_t start = 0; start < order.size(); start += options.sentences_per_doc) {
    SourceDocument doc;
    char id[32];
    std::snprintf(id, sizeof id, "%s-%06zu", side.lang.str().c_str(), start / options.sentences_per_doc);
    doc.doc_id = id;
    doc.lang = side.lang;
    doc.source = "synthetic";
    std::string text;
    for (std::size_t i = start; i < std::min(order.size(), start + options.sentences_per_doc); ++i) {
      if (!text.empty()) text += ' ';
      text += side.texts[order[i]];
    }
    doc.text = text;
    jsonl << doc.to_json().dump() << '\n';
    docs.push_back(std::move(doc));
  }
  jsonl.close();

  IngestOptions ingest_options;
  ingest_options.languages = LanguageSet{"en", side.lang.str()};
  IngestReport report;
  const auto records = ingest(docs, ingest_options, report);
  if (records.size() != side.texts.size()) {
    throw std::runtime_error("segmentation of the synthetic " + side.lang.str() + " corpus gave " +
                             std::to_string(records.size()) + " sentences, expected " +
                             std::to_string(side.texts.size()));
  }
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < side.texts.size(); ++i) row_of.emplace(side.texts[i], i);
  EmbeddingMatrix matrix(options.dim);
  for (const auto& r : records) {
    const auto it = row_of.find(r.text);
    if (it == row_of.end()) throw std::runtime_error("unexpected segment: " + r.text);
    matrix.add(r.sent_id, side.vectors[it->second]);
    id_of[r.text] = r.sent_id;
  }
  export_embeddings(matrix, dir / (side.lang.str() + ".semb"));
  return matrix;
}

}  // namespace

PlantedRun build_planted_run(const fs::path& dir, const PlantedOptions& options) {
  fs::create_directories(dir);
  Rng rng(options.seed);
  const LanguageCode en("en");
  const LanguageCode hi("hi");
  const auto en_vocab = vocabulary(en);
  const auto hi_vocab = vocabulary(hi);

  std::vector<std::vector<float>> topics(options.topics);
  for (auto& t : topics) t = random_unit(rng, options.dim);
  const double w = options.topic_weight;
  const double rest = std::sqrt(1.0 - w * w);
  auto topical = [&](std::size_t topic) {
    const auto g = random_unit(rng, options.dim);
    std::vector<float> v(options.dim);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(w * topics[topic][i] + rest * g[i]);
    normalize_in_place(v);
    return v;
  };

  SideBuilder en_side{en, {}, {}, {}};
  SideBuilder hi_side{hi, {}, {}, {}};
  std::vector<std::pair<std::string, std::string>> planted_texts;
  for (std::size_t i = 0; i < options.planted; ++i) {
    const auto base = topical(i % options.topics);
    const auto e = en_side.fresh_text(en_vocab, rng);
    const auto h = hi_side.fresh_text(hi_vocab, rng);
    en_side.texts.push_back(e);
    en_side.vectors.push_back(perturb(base, options.pair_noise, rng));
    hi_side.texts.push_back(h);
    hi_side.vectors.push_back(perturb(base, options.pair_noise, rng));
    planted_texts.emplace_back(e, h);
  }
  std::vector<std::string> distractor_texts;
  for (auto* side : {&en_side, &hi_side}) {
    const auto& vocab = side == &en_side ? en_vocab : hi_vocab;
    for (std::size_t i = 0; i < options.distractors_per_side; ++i) {
      side->texts.push_back(side->fresh_text(vocab, rng));
      side->vectors.push_back(topical(uniform_index(rng, options.topics)));
      distractor_texts.push_back(side->texts.back());
    }
  }

  PlantedRun run;
  std::unordered_map<std::string, std::string> en_ids;
  std::unordered_map<std::string, std::string> hi_ids;
  run.en = write_side(dir, en_side, options, rng, en_ids);
  run.hi = write_side(dir, hi_side, options, rng, hi_ids);
  for (const auto& [e, h] : planted_texts) run.planted.emplace(en_ids.at(e), hi_ids.at(h));
  for (const auto& t : distractor_texts) {
    const auto it = en_ids.find(t);
    run.distractor_ids.insert(it != en_ids.end() ? it->second : hi_ids.at(t));
  }

  run.out_dir = dir / "run";
  nlohmann::json config = {
      {"languages", {"en", "hi"}},
      {"seed", options.seed},
      {"out_dir", "run"},
      {"mining", {{"mode", "monolingual"}}},
      {"thresholds", {{"monolingual", 0.80}}},
      {"corpora",
       {{{"lang", "en"}, {"documents", "en.docs.jsonl"}, {"embeddings", "en.semb"}},
        {{"lang", "hi"}, {"documents", "hi.docs.jsonl"}, {"embeddings", "hi.semb"}}}},
  };
  run.config = dir / "config.json";
  write_text(run.config, config.dump(2) + "\n");
  return run;
}

namespace {

std::vector<long double> average_ranks(const std::vector<double>& v) {
  std::vector<long double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0;
    std::size_t equal = 0;
    for (const double x : v) {
      if (x < v[i]) ++less;
      if (x == v[i]) ++equal;
    }
    ranks[i] = 1.0L + less + (equal - 1) / 2.0L;
  }
  return ranks;
}

}  // namespace

double brute_force_spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const auto n = static_cast<long double>(xs.size());
  long double mx = 0;
  long double my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0;
  long double sxx = 0;
  long double syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace bitext::testing
