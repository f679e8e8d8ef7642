#include "bitext/refine.hpp"

#include <algorithm>
#include <fstream>

#include "bitext/error.hpp"
#include "bitext/rng.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

namespace {

struct Sides {
  const std::string* en = nullptr;
  const std::string* other = nullptr;
  const std::string* other_id = nullptr;
  const LanguageCode* other_lang = nullptr;
};

// English and non-English side of an English-centric pair.
Sides english_sides(const CandidatePair& p) {
  if (p.src_lang == english()) return {&p.src_text, &p.tgt_text, &p.tgt_id, &p.tgt_lang};
  if (p.tgt_lang == english()) return {&p.tgt_text, &p.src_text, &p.src_id, &p.src_lang};
  return {};
}

std::string render_constituent(const CandidatePair& p) {
  return p.src_id + ">" + p.tgt_id + "|" + std::string(to_string(p.mode)) + "|" + p.bucket + "|" +
         format_score(p.las);
}

}  // namespace

void FilterConfig::validate() const {
  BITEXT_CHECK(min_en_words >= 1, InvalidArgument, "min_en_words must be at least 1");
}

nlohmann::json FilterReport::to_json() const {
  return {{"input", input},
          {"removed_threshold", removed_threshold},
          {"removed_length", removed_length},
          {"removed_langid", removed_langid},
          {"removed_duplicates", removed_duplicates},
          {"output", output},
          {"filters_applied", filters_applied},
          {"warnings", warnings}};
}

std::vector<CandidatePair> dedup_exact(const std::vector<CandidatePair>& pairs) {
  std::unordered_set<std::string> seen;
  std::vector<CandidatePair> out;
  for (const auto& p : pairs) {
    std::string key = p.src_text;
    key.push_back('\0');
    key += p.tgt_text;
    if (seen.insert(std::move(key)).second) out.push_back(p);
  }
  return out;
}

std::vector<CandidatePair> filter_min_length(const std::vector<CandidatePair>& pairs, const FilterConfig& config) {
  config.validate();
  std::vector<CandidatePair> out;
  for (const auto& p : pairs) {
    const auto sides = english_sides(p);
    if (sides.en && unicode::count_words(*sides.en) < config.min_en_words) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<CandidatePair> filter_langid(const std::vector<CandidatePair>& pairs, const LanguageDetector& detector) {
  std::vector<CandidatePair> out;
  for (const auto& p : pairs) {
    if (detector.detect(p.src_text, p.src_lang).lang != p.src_lang) continue;
    if (detector.detect(p.tgt_text, p.tgt_lang).lang != p.tgt_lang) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<CandidatePair> filter_threshold(const std::vector<CandidatePair>& pairs, const ThresholdPolicy& policy) {
  std::vector<CandidatePair> out;
  for (const auto& p : pairs) {
    if (p.mode != MiningMode::pivot && p.las < policy.for_mode(p.mode)) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<CandidatePair> apply_filters(const std::vector<CandidatePair>& pairs, const ThresholdPolicy& policy,
                                         const FilterConfig& config, const LanguageDetector* detector,
                                         FilterReport& report) {
  config.validate();
  report.input += pairs.size();

  auto current = filter_threshold(pairs, policy);
  report.removed_threshold += pairs.size() - current.size();
  report.filters_applied.emplace_back("threshold");

  auto next = filter_min_length(current, config);
  report.removed_length += current.size() - next.size();
  report.filters_applied.emplace_back("min_length");
  current = std::move(next);

  if (config.langid_enabled) {
    try {
      BITEXT_CHECK(detector != nullptr, DetectorUnavailable, "no language detector configured");
      next = filter_langid(current, *detector);
      report.removed_langid += current.size() - next.size();
      report.filters_applied.emplace_back("langid");
      current = std::move(next);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DetectorUnavailable || config.langid_hard_fail) throw;
      report.warnings.push_back(std::string("language filter skipped: ") + e.what());
    }
  }

  if (config.dedup_enabled) {
    next = dedup_exact(current);
    report.removed_duplicates += current.size() - next.size();
    report.filters_applied.emplace_back("dedup");
    current = std::move(next);
  }
  report.output += current.size();
  return current;
}

std::vector<HeldOutSet> load_heldout(const std::filesystem::path& dir) {
  BITEXT_CHECK(std::filesystem::is_directory(dir), Io, "held-out directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, HeldOutSet> sets;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    const auto dot = stem.rfind('.');
    BITEXT_CHECK(dot != std::string::npos, InvalidArgument,
                 "held-out file must be named <pair>.<side>.txt: " + file.filename().string());
    const std::string name = stem.substr(0, dot);
    const LanguageCode side(stem.substr(dot + 1));
    const auto label_start = name.rfind('.');
    const auto [a, b] = parse_pair_label(label_start == std::string::npos ? name : name.substr(label_start + 1));
    BITEXT_CHECK(a == english() || b == english(), InvalidArgument, "held-out pair must include en: " + name);
    const LanguageCode indic = a == english() ? b : a;
    BITEXT_CHECK(side == english() || side == indic, InvalidArgument,
                 "side " + side.str() + " is not part of " + name);

    auto& set = sets[name];
    set.name = name;
    set.indic = indic;
    auto& target = side == english() ? set.english : set.indic_side;
    std::ifstream in(file, std::ios::binary);
    BITEXT_CHECK(in.good(), Io, "cannot open " + file.string());
    std::string line;
    while (std::getline(in, line)) {
      auto folded = unicode::fold_for_overlap(line);
      if (!folded.empty()) target.insert(std::move(folded));
    }
  }
  std::vector<HeldOutSet> out;
  for (auto& [name, set] : sets) out.push_back(std::move(set));
  return out;
}

nlohmann::json DecontaminationReport::to_json() const {
  return {{"input", input}, {"removed", removed}, {"removed_by_set", removed_by_set}};
}

std::vector<CandidatePair> decontaminate(const std::vector<CandidatePair>& pairs, const std::vector<HeldOutSet>& sets,
                                         DecontaminationReport* report) {
  DecontaminationReport local;
  for (const auto& set : sets) local.removed_by_set[set.name] = 0;
  std::vector<CandidatePair> out;
  for (const auto& p : pairs) {
    bool contaminated = false;
    for (const auto& [text, lang] : {std::pair{&p.src_text, &p.src_lang}, std::pair{&p.tgt_text, &p.tgt_lang}}) {
      const auto folded = unicode::fold_for_overlap(*text);
      if (folded.empty()) continue;
      for (const auto& set : sets) {
        const bool hit = *lang == english() ? set.english.contains(folded)
                                            : (*lang == set.indic && set.indic_side.contains(folded));
        if (hit) {
          ++local.removed_by_set[set.name];
          contaminated = true;
        }
      }
    }
    if (!contaminated) out.push_back(p);
  }
  local.input = pairs.size();
  local.removed = pairs.size() - out.size();
  if (report) *report = std::move(local);
  return out;
}

nlohmann::json PivotReport::to_json() const { return {{"groups", groups}, {"only_a", only_a}, {"only_b", only_b}}; }

std::vector<CandidatePair> pivot_extract(const std::vector<CandidatePair>& corpus_a,
                                         const std::vector<CandidatePair>& corpus_b, std::uint64_t seed,
                                         PivotReport* report) {
  struct Group {
    std::vector<const CandidatePair*> a;
    std::vector<const CandidatePair*> b;
  };
  std::map<std::string, Group> groups;
  for (const auto* corpus : {&corpus_a, &corpus_b}) {
    for (const auto& p : *corpus) {
      const auto sides = english_sides(p);
      BITEXT_CHECK(sides.en != nullptr, InvalidArgument,
                   "pivot input pair " + p.src_id + " / " + p.tgt_id + " has no English side");
      auto& group = groups[unicode::collapse_whitespace(*sides.en)];
      (corpus == &corpus_a ? group.a : group.b).push_back(&p);
    }
  }

  PivotReport local;
  std::vector<CandidatePair> out;
  for (const auto& [en, group] : groups) {
    if (group.a.empty() || group.b.empty()) {
      ++(group.a.empty() ? local.only_b : local.only_a);
      continue;
    }
    ++local.groups;
    Rng rng(derive_seed(seed, en));
    const std::uint64_t n = group.b.size();
    const std::uint64_t pick = uniform_index(rng, group.a.size() * n);
    const CandidatePair& pa = *group.a[pick / n];
    const CandidatePair& pb = *group.b[pick % n];
    const auto sa = english_sides(pa);
    const auto sb = english_sides(pb);

    CandidatePair p;
    p.src_id = *sa.other_id;
    p.tgt_id = *sb.other_id;
    p.src_lang = *sa.other_lang;
    p.tgt_lang = *sb.other_lang;
    p.src_text = *sa.other;
    p.tgt_text = *sb.other;
    p.las = std::min(pa.las, pb.las);
    p.mode = MiningMode::pivot;
    p.bucket = "*";
    p.via_src = render_constituent(pa);
    p.via_tgt = render_constituent(pb);
    out.push_back(std::move(p));
  }
  sort_canonical(out);
  if (report) *report = local;
  return out;
}

}  // namespace bitext
