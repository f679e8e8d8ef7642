#include "bitext/stats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bitext/error.hpp"
#include "bitext/tsv.hpp"
#include "bitext/unicode.hpp"

namespace bitext {

namespace {

StatsRow make_row(std::string pair, std::uint64_t existing, std::uint64_t mined) {
  StatsRow row{std::move(pair), existing, mined, existing + mined, std::nullopt};
  if (existing > 0) row.increase_factor = static_cast<double>(row.total) / static_cast<double>(existing);
  return row;
}

nlohmann::json row_json(const StatsRow& r) {
  return {{"pair", r.pair},
          {"existing", r.existing},
          {"mined", r.mined},
          {"total", r.total},
          {"increase_factor", r.increase_factor ? nlohmann::json(*r.increase_factor) : nlohmann::json(nullptr)},
          {"increase_factor_display", format_factor(r.increase_factor)}};
}

}  // namespace

CorpusStats compute_stats(const std::vector<PairCount>& counts) {
  CorpusStats stats;
  std::uint64_t existing = 0;
  std::uint64_t mined = 0;
  for (const auto& c : counts) {
    stats.rows.push_back(make_row(c.pair, c.existing, c.mined));
    existing += c.existing;
    mined += c.mined;
  }
  stats.overall = make_row("total", existing, mined);
  return stats;
}

std::string format_factor(const std::optional<double>& factor) {
  if (!factor) return "∞/na";
  char buf[32];
  // round half away from zero at one decimal
  std::snprintf(buf, sizeof(buf), "%.1f", std::round(*factor * 10.0) / 10.0);
  return buf;
}

nlohmann::json CorpusStats::to_json() const {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& r : rows) j["pairs"].push_back(row_json(r));
  j["overall"] = row_json(overall);
  return j;
}

std::string CorpusStats::render() const {
  std::ostringstream out;
  std::vector<const StatsRow*> all;
  for (const auto& r : rows) all.push_back(&r);
  all.push_back(&overall);
  auto line = [&](std::string_view label, auto&& value) {
    out << label;
    for (const auto* r : all) out << '\t' << value(*r);
    out << '\n';
  };
  line("source", [](const StatsRow& r) { return r.pair == "total" ? std::string("Total") : r.pair; });
  line("existing", [](const StatsRow& r) { return std::to_string(r.existing); });
  line("new", [](const StatsRow& r) { return std::to_string(r.mined); });
  line("total", [](const StatsRow& r) { return std::to_string(r.total); });
  line("increase_factor", [](const StatsRow& r) { return format_factor(r.increase_factor); });
  return out.str();
}

std::map<std::string, std::uint64_t> read_counts_tsv(std::istream& in) {
  std::map<std::string, std::uint64_t> counts;
  tsv::Reader reader(in);
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (!f.empty() && !f[0].empty() && f[0][0] == '#') continue;
    BITEXT_CHECK(f.size() == 2, FormatError, "counts line " + std::to_string(reader.line()) + ": expected pair and count");
    const std::string value(unicode::trim(f[1]));
    std::uint64_t n = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), n);
    BITEXT_CHECK(res.ec == std::errc() && res.ptr == value.data() + value.size(), FormatError,
                 "counts line " + std::to_string(reader.line()) + ": bad count '" + f[1] + "'");
    counts[std::string(unicode::trim(f[0]))] = n;
  }
  return counts;
}

std::map<std::string, std::uint64_t> read_counts_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path.string());
  return read_counts_tsv(in);
}

std::uint64_t count_pairs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot open " + path.string());
  std::uint64_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") ++n;
  }
  return n;
}

}  // namespace bitext
