#include "bitext/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "bitext/error.hpp"
#include "bitext/rng.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

namespace {

constexpr double kBandWidth = 0.1;
// absorbs the rounding in t +/- 0.1 so that literal boundary scores classify as written
constexpr double kBoundarySlack = 1e-12;
constexpr LasBand kBands[] = {LasBand::definite_accept, LasBand::marginal_accept, LasBand::reject};

std::string padded(std::size_t i, int width) {
  std::string s = std::to_string(i);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

nlohmann::json summary(const std::vector<double>& scores) {
  if (scores.empty()) return {{"annotations", 0}, {"mean", nullptr}, {"median", nullptr}};
  return {{"annotations", scores.size()}, {"mean", mean(scores)}, {"median", median(scores)}};
}

nlohmann::json maybe_spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2) return nullptr;
  try {
    return spearman(xs, ys);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateInput) return nullptr;
    throw;
  }
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::size_t english_length(const CandidatePair& p) {
  if (p.tgt_lang == english() && p.src_lang != english()) return unicode::count_words(p.tgt_text);
  return unicode::count_words(p.src_text);
}

struct Scored {
  const AnnotationSample* sample;
  std::vector<double> scores;
};

nlohmann::json summarize(const std::vector<const Scored*>& items) {
  nlohmann::json j;
  std::size_t annotations = 0;
  std::map<LasBand, std::vector<double>> raw;
  std::map<LasBand, std::size_t> samples;
  std::map<LasBand, std::size_t> accurate;
  std::vector<double> las;
  std::vector<double> sts;
  std::vector<double> length;
  std::size_t multi = 0;
  std::size_t agree = 0;
  for (const auto* item : items) {
    annotations += item->scores.size();
    const LasBand band = item->sample->band;
    raw[band].insert(raw[band].end(), item->scores.begin(), item->scores.end());
    ++samples[band];
    const double m = mean(item->scores);
    if (m >= 4.0) ++accurate[band];
    las.push_back(item->sample->pair.las);
    sts.push_back(m);
    length.push_back(static_cast<double>(english_length(item->sample->pair)));
    if (item->scores.size() >= 2) {
      ++multi;
      const auto [lo, hi] = std::minmax_element(item->scores.begin(), item->scores.end());
      if (*hi - *lo <= 1.0) ++agree;
    }
  }
  j["bitext_pairs"] = items.size();
  j["annotations"] = annotations;

  auto& bands = j["bands"] = nlohmann::json::object();
  for (const auto band : kBands) {
    auto s = summary(raw[band]);
    s["samples"] = samples[band];
    s["accuracy"] = samples[band] == 0 ? nlohmann::json(nullptr)
                                       : nlohmann::json(static_cast<double>(accurate[band]) /
                                                        static_cast<double>(samples[band]));
    bands[std::string(to_string(band))] = std::move(s);
  }

  std::vector<double> accepted = raw[LasBand::definite_accept];
  accepted.insert(accepted.end(), raw[LasBand::marginal_accept].begin(), raw[LasBand::marginal_accept].end());
  auto all = summary(accepted);
  const auto& d = bands["definite_accept"]["mean"];
  const auto& mg = bands["marginal_accept"]["mean"];
  all["equal_weight_mean"] =
      d.is_null() || mg.is_null() ? nlohmann::json(nullptr) : nlohmann::json(0.5 * (d.get<double>() + mg.get<double>()));
  const std::size_t accepted_samples = samples[LasBand::definite_accept] + samples[LasBand::marginal_accept];
  all["samples"] = accepted_samples;
  all["accuracy"] = accepted_samples == 0
                        ? nlohmann::json(nullptr)
                        : nlohmann::json(static_cast<double>(accurate[LasBand::definite_accept] +
                                                             accurate[LasBand::marginal_accept]) /
                                         static_cast<double>(accepted_samples));
  j["all_accept"] = std::move(all);

  j["spearman"] = {{"las_sts", maybe_spearman(las, sts)},
                   {"las_length", maybe_spearman(las, length)},
                   {"sts_length", maybe_spearman(sts, length)}};
  j["agreement_within_1"] =
      multi == 0 ? nlohmann::json(nullptr) : nlohmann::json(static_cast<double>(agree) / static_cast<double>(multi));
  j["samples_with_multiple_annotations"] = multi;
  return j;
}

std::string cell(const nlohmann::json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v.get<double>());
  return buf;
}

}  // namespace

std::string_view to_string(LasBand band) {
  switch (band) {
    case LasBand::definite_accept:
      return "definite_accept";
    case LasBand::marginal_accept:
      return "marginal_accept";
    case LasBand::reject:
      return "reject";
  }
  return "reject";
}

LasBand parse_band(std::string_view text) {
  for (const auto band : kBands) {
    if (text == to_string(band)) return band;
  }
  BITEXT_THROW(InvalidArgument, "unknown band: " + std::string(text));
}

std::optional<LasBand> classify_band(double las, double threshold) {
  const double d = las - threshold;
  if (d > kBandWidth + kBoundarySlack) return LasBand::definite_accept;
  if (d > 0.0) return LasBand::marginal_accept;
  if (d >= -kBandWidth - kBoundarySlack) return LasBand::reject;
  return std::nullopt;
}

nlohmann::json SamplingReport::to_json() const {
  return {{"available", available}, {"drawn", drawn}, {"batches", batches}, {"warnings", warnings}};
}

std::vector<AnnotationSample> stratified_sample(const std::vector<CandidatePair>& pairs,
                                                const SamplingOptions& options, SamplingReport* report) {
  BITEXT_CHECK(options.batch_size > 0, InvalidArgument, "batch size must be positive");
  std::map<LasBand, std::vector<const CandidatePair*>> pools;
  for (const auto& p : pairs) {
    if (const auto band = classify_band(p.las, options.threshold)) pools[*band].push_back(&p);
  }

  SamplingReport local;
  Rng rng(options.seed);
  std::vector<AnnotationSample> samples;
  for (const auto band : kBands) {
    const auto& pool = pools[band];
    const std::string name(to_string(band));
    local.available[name] = pool.size();
    std::vector<std::size_t> picked;
    if (pool.size() <= options.n_per_band) {
      if (pool.size() < options.n_per_band) {
        local.warnings.push_back(name + ": only " + std::to_string(pool.size()) + " of " +
                                 std::to_string(options.n_per_band) + " requested pairs available");
      }
      picked.resize(pool.size());
      for (std::size_t i = 0; i < picked.size(); ++i) picked[i] = i;
    } else {
      picked = sample_without_replacement(pool.size(), options.n_per_band, rng);
    }
    local.drawn[name] = picked.size();
    for (const std::size_t i : picked) samples.push_back({"", 0, band, *pool[i]});
  }

  shuffle(samples, rng);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].sample_id = options.id_prefix + padded(i, 5);
    samples[i].batch_id = i / options.batch_size;
  }
  local.batches = (samples.size() + options.batch_size - 1) / options.batch_size;
  if (report) *report = std::move(local);
  return samples;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  BITEXT_CHECK(xs.size() == ys.size(), LengthMismatch,
               "series lengths differ: " + std::to_string(xs.size()) + " vs " + std::to_string(ys.size()));
  BITEXT_CHECK(xs.size() >= 2, InvalidArgument, "correlation needs at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  BITEXT_CHECK(sxx > 0.0 && syy > 0.0, DegenerateInput, "a constant series has no rank correlation");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

nlohmann::json analysis_report(const std::vector<AnnotationSample>& samples,
                               const std::vector<Annotation>& annotations) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    BITEXT_CHECK(by_id.emplace(samples[i].sample_id, i).second, DuplicateId,
                 "sample id repeated: " + samples[i].sample_id);
  }
  std::vector<Scored> scored(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) scored[i].sample = &samples[i];
  std::size_t unmatched = 0;
  for (const auto& a : annotations) {
    const auto it = by_id.find(a.sample_id);
    if (it == by_id.end()) {
      ++unmatched;
      continue;
    }
    scored[it->second].scores.push_back(a.sts);
  }

  std::map<std::string, std::vector<const Scored*>> by_language;
  std::vector<const Scored*> overall;
  std::size_t unannotated = 0;
  for (const auto& s : scored) {
    if (s.scores.empty()) {
      ++unannotated;
      continue;
    }
    by_language[pair_label(s.sample->pair.src_lang, s.sample->pair.tgt_lang)].push_back(&s);
    overall.push_back(&s);
  }

  nlohmann::json report;
  auto& langs = report["languages"] = nlohmann::json::object();
  for (const auto& [label, items] : by_language) langs[label] = summarize(items);
  report["overall"] = summarize(overall);
  report["unannotated_samples"] = unannotated;
  report["unmatched_annotations"] = unmatched;
  return report;
}

std::string render_analysis_table(const nlohmann::json& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %8s %8s %8s %8s %8s %8s\n", "language", "pairs", "annot",
                "all_acc", "definite", "marginal", "reject", "las_sts", "las_len", "sts_len");
  out << line;
  auto row = [&](const std::string& name, const nlohmann::json& j) {
    std::snprintf(line, sizeof(line), "%-10s %8zu %8zu %8s %8s %8s %8s %8s %8s %8s\n", name.c_str(),
                  j["bitext_pairs"].get<std::size_t>(), j["annotations"].get<std::size_t>(),
                  cell(j["all_accept"]["mean"]).c_str(), cell(j["bands"]["definite_accept"]["mean"]).c_str(),
                  cell(j["bands"]["marginal_accept"]["mean"]).c_str(), cell(j["bands"]["reject"]["mean"]).c_str(),
                  cell(j["spearman"]["las_sts"]).c_str(), cell(j["spearman"]["las_length"]).c_str(),
                  cell(j["spearman"]["sts_length"]).c_str());
    out << line;
  };
  for (const auto& [label, j] : report["languages"].items()) row(label, j);
  row("overall", report["overall"]);
  return out.str();
}

namespace csv {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.put(',');
    out << quote(fields[i]);
  }
  out << "\r\n";
}

bool read_row(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  int c;
  while ((c = in.get()) != EOF) {
    any = true;
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && in.peek() == '\n') in.get();
      if (fields.empty() && field.empty()) {
        any = false;  // blank line
        continue;
      }
      break;
    } else {
      field.push_back(ch);
    }
  }
  BITEXT_CHECK(!quoted, FormatError, "unterminated quoted CSV field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace csv

void write_annotation_csv(std::ostream& out, const std::vector<AnnotationSample>& samples) {
  csv::write_row(out, {"sample_id", "batch_id", "src_text", "tgt_text"});
  for (const auto& s : samples) {
    csv::write_row(out, {s.sample_id, std::to_string(s.batch_id), s.pair.src_text, s.pair.tgt_text});
  }
}

void write_sample_key_csv(std::ostream& out, const std::vector<AnnotationSample>& samples) {
  csv::write_row(out, {"sample_id", "batch_id", "band", "las", "src_id", "tgt_id", "src_lang", "tgt_lang", "mode",
                       "bucket", "src_text", "tgt_text"});
  for (const auto& s : samples) {
    const auto& p = s.pair;
    csv::write_row(out, {s.sample_id, std::to_string(s.batch_id), std::string(to_string(s.band)),
                         format_score(p.las), p.src_id, p.tgt_id, p.src_lang.str(), p.tgt_lang.str(),
                         std::string(to_string(p.mode)), p.bucket, p.src_text, p.tgt_text});
  }
}

namespace {

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  BITEXT_CHECK(res.ec == std::errc() && res.ptr == text.data() + text.size(), FormatError,
               std::string("bad ") + what + ": '" + text + "'");
  return value;
}

}  // namespace

std::vector<AnnotationSample> read_sample_key_csv(std::istream& in) {
  std::vector<AnnotationSample> samples;
  std::vector<std::string> f;
  bool first = true;
  while (csv::read_row(in, f)) {
    if (first && !f.empty() && f[0] == "sample_id") {
      first = false;
      continue;
    }
    first = false;
    BITEXT_CHECK(f.size() == 12, FormatError, "sample key rows need 12 columns, got " + std::to_string(f.size()));
    AnnotationSample s;
    s.sample_id = f[0];
    s.batch_id = parse_number<std::size_t>(f[1], "batch id");
    s.band = parse_band(f[2]);
    s.pair.las = parse_number<double>(f[3], "score");
    s.pair.src_id = f[4];
    s.pair.tgt_id = f[5];
    s.pair.src_lang = LanguageCode(f[6]);
    s.pair.tgt_lang = LanguageCode(f[7]);
    s.pair.mode = parse_mining_mode(f[8]);
    s.pair.bucket = f[9];
    s.pair.src_text = f[10];
    s.pair.tgt_text = f[11];
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Annotation> read_annotations_csv(std::istream& in) {
  std::vector<Annotation> out;
  std::vector<std::string> f;
  bool first = true;
  while (csv::read_row(in, f)) {
    if (first && !f.empty() && f[0] == "sample_id") {
      first = false;
      continue;
    }
    first = false;
    BITEXT_CHECK(f.size() == 3, FormatError, "annotation rows need sample_id,annotator_id,sts");
    const int sts = parse_number<int>(f[2], "STS score");
    BITEXT_CHECK(sts >= 0 && sts <= 5, FormatError, "STS score out of 0..5: " + f[2]);
    out.push_back({f[0], f[1], sts});
  }
  return out;
}

void write_annotations_csv(std::ostream& out, const std::vector<Annotation>& annotations) {
  csv::write_row(out, {"sample_id", "annotator_id", "sts"});
  for (const auto& a : annotations) csv::write_row(out, {a.sample_id, a.annotator_id, std::to_string(a.sts)});
}

}  // namespace bitext
