#include "bitext/pairs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "bitext/error.hpp"
#include "bitext/tsv.hpp"

namespace bitext {

std::string_view to_string(MiningMode mode) {
  switch (mode) {
    case MiningMode::comparable:
      return "comparable";
    case MiningMode::docpair:
      return "docpair";
    case MiningMode::monolingual:
      return "monolingual";
    case MiningMode::pivot:
      return "pivot";
  }
  return "comparable";
}

MiningMode parse_mining_mode(std::string_view text) {
  for (const auto mode : {MiningMode::comparable, MiningMode::docpair, MiningMode::monolingual, MiningMode::pivot}) {
    if (text == to_string(mode)) return mode;
  }
  BITEXT_THROW(InvalidArgument, "unknown mining mode: " + std::string(text));
}

void sort_canonical(std::vector<CandidatePair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const CandidatePair& a, const CandidatePair& b) {
    if (a.tgt_id != b.tgt_id) return a.tgt_id < b.tgt_id;
    return a.src_id < b.src_id;
  });
}

std::string format_score(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_pairs_tsv(std::ostream& out, const std::vector<CandidatePair>& pairs) {
  for (const auto& p : pairs) {
    std::vector<std::string> fields{p.src_id, p.tgt_id, p.src_text, p.tgt_text,
                                    format_score(p.las), std::string(to_string(p.mode)), p.bucket};
    if (p.mode == MiningMode::pivot) {
      fields.push_back(p.via_src);
      fields.push_back(p.via_tgt);
    }
    tsv::write_row(out, fields);
  }
}

void write_pairs_tsv(const std::filesystem::path& path, const std::vector<CandidatePair>& pairs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  BITEXT_CHECK(out.good(), Io, "cannot open " + path.string() + " for writing");
  write_pairs_tsv(out, pairs);
  out.flush();
  BITEXT_CHECK(out.good(), Io, "write failed for " + path.string());
}

std::vector<CandidatePair> read_pairs_tsv(std::istream& in, const LanguageCode& src_lang,
                                          const LanguageCode& tgt_lang) {
  std::vector<CandidatePair> pairs;
  tsv::Reader reader(in);
  std::vector<std::string> f;
  while (reader.next(f)) {
    const std::string where = "pair file line " + std::to_string(reader.line());
    BITEXT_CHECK(f.size() == 7 || f.size() == 9, FormatError, where + ": expected 7 or 9 columns");
    CandidatePair p;
    p.src_id = f[0];
    p.tgt_id = f[1];
    p.src_lang = src_lang;
    p.tgt_lang = tgt_lang;
    p.src_text = f[2];
    p.tgt_text = f[3];
    const auto res = std::from_chars(f[4].data(), f[4].data() + f[4].size(), p.las);
    BITEXT_CHECK(res.ec == std::errc() && res.ptr == f[4].data() + f[4].size(), FormatError,
                 where + ": bad score '" + f[4] + "'");
    p.mode = parse_mining_mode(f[5]);
    p.bucket = f[6];
    if (f.size() == 9) {
      p.via_src = f[7];
      p.via_tgt = f[8];
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<CandidatePair> read_pairs_tsv(const std::filesystem::path& path, const LanguageCode& src_lang,
                                          const LanguageCode& tgt_lang) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path.string());
  return read_pairs_tsv(in, src_lang, tgt_lang);
}

std::string pair_label(const LanguageCode& a, const LanguageCode& b) { return a.str() + "-" + b.str(); }

std::pair<LanguageCode, LanguageCode> parse_pair_label(std::string_view label) {
  const auto dash = label.find('-');
  BITEXT_CHECK(dash != std::string_view::npos && label.find('-', dash + 1) == std::string_view::npos,
               InvalidArgument, "language pair must look like en-hi: " + std::string(label));
  return {LanguageCode(label.substr(0, dash)), LanguageCode(label.substr(dash + 1))};
}

}  // namespace bitext
