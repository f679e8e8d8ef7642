#include "bitext/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "bitext/error.hpp"
#include "bitext/segmenter.hpp"
#include "bitext/tsv.hpp"

namespace bitext {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool looks_like_month(std::string_view v) {
  if (v.size() != 7 || v[4] != '-') return false;
  int year = 0;
  int month = 0;
  return parse_int(v.substr(0, 4), year) && parse_int(v.substr(5, 2), month) && month >= 1 && month <= 12;
}

std::optional<BucketKey> bucket_for(const SourceDocument& doc, BucketKind kind) {
  switch (kind) {
    case BucketKind::month:
      if (!doc.published) return std::nullopt;
      return BucketKey{kind, doc.published->month_key()};
    case BucketKind::document_pair:
      if (!doc.pair_key || doc.pair_key->empty()) return std::nullopt;
      return BucketKey{kind, *doc.pair_key};
    case BucketKind::global:
      return BucketKey{kind, "*"};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  Date d;
  if (text.size() < 7 || text[4] != '-') return std::nullopt;
  if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month)) return std::nullopt;
  if (d.month < 1 || d.month > 12) return std::nullopt;
  if (text.size() == 7) return d;
  if (text.size() < 10 || text[7] != '-' || !parse_int(text.substr(8, 2), d.day)) return std::nullopt;
  if (d.day < 1 || d.day > 31) return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  return d;
}

std::string Date::month_key() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

SourceDocument SourceDocument::from_json(const nlohmann::json& j, const LanguageSet& languages) {
  BITEXT_CHECK(j.is_object(), InvalidDocument, "document must be a JSON object");
  const auto string_field = [&](const char* key) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    BITEXT_CHECK(it->is_string(), InvalidDocument, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
  };

  SourceDocument doc;
  auto doc_id = string_field("doc_id");
  BITEXT_CHECK(doc_id && !doc_id->empty(), InvalidDocument, "missing doc_id");
  doc.doc_id = std::move(*doc_id);

  const auto lang = string_field("lang");
  BITEXT_CHECK(lang.has_value(), InvalidDocument, "document '" + doc.doc_id + "' has no lang");
  doc.lang = languages.require(*lang);

  doc.text = string_field("text");
  if (const auto it = j.find("pages"); it != j.end() && !it->is_null()) {
    BITEXT_CHECK(it->is_array(), InvalidDocument, "field 'pages' must be an array");
    std::vector<std::string> pages;
    for (const auto& page : *it) {
      BITEXT_CHECK(page.is_string(), InvalidDocument, "pages must be strings");
      pages.push_back(page.get<std::string>());
    }
    doc.pages = std::move(pages);
  }
  BITEXT_CHECK(doc.text.has_value() != doc.pages.has_value(), InvalidDocument,
               "document '" + doc.doc_id + "' must have exactly one of text/pages");
  if (doc.text) {
    BITEXT_CHECK(unicode::is_valid_utf8(*doc.text), InvalidDocument, "text is not valid UTF-8");
  } else {
    for (const auto& page : *doc.pages) {
      BITEXT_CHECK(unicode::is_valid_utf8(page), InvalidDocument, "page is not valid UTF-8");
    }
  }

  doc.source = string_field("source").value_or("");
  if (const auto published = string_field("published"); published && !published->empty()) {
    doc.published = Date::parse(*published);
    BITEXT_CHECK(doc.published.has_value(), InvalidDocument, "unparseable published date '" + *published + "'");
  }
  doc.pair_key = string_field("pair_key");
  return doc;
}

nlohmann::json SourceDocument::to_json() const {
  nlohmann::json j = {{"doc_id", doc_id}, {"lang", lang.str()}, {"source", source}};
  if (text) j["text"] = *text;
  if (pages) j["pages"] = *pages;
  if (published) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", published->year, published->month,
                  published->day == 0 ? 1 : published->day);
    j["published"] = buf;
  }
  if (pair_key) j["pair_key"] = *pair_key;
  return j;
}

std::string_view to_string(BucketKind kind) {
  switch (kind) {
    case BucketKind::month: return "month";
    case BucketKind::document_pair: return "document_pair";
    case BucketKind::global: return "global";
  }
  return "global";
}

BucketKind parse_bucket_kind(std::string_view text) {
  if (text == "month") return BucketKind::month;
  if (text == "document_pair" || text == "docpair") return BucketKind::document_pair;
  if (text == "global") return BucketKind::global;
  BITEXT_THROW(InvalidArgument, "unknown bucketing '" + std::string(text) + "'");
}

void IngestReport::record(IngestIssue issue) {
  ++error_counts[issue.error];
  issues.push_back(std::move(issue));
}

nlohmann::json IngestReport::to_json() const {
  nlohmann::json j = {
      {"documents_read", documents_read},
      {"documents_ingested", documents_ingested},
      {"documents_skipped", documents_skipped},
      {"sentences", sentences},
      {"errors", error_counts},
  };
  auto& list = j["issues"] = nlohmann::json::array();
  for (const auto& issue : issues) {
    list.push_back({{"line", issue.line}, {"doc_id", issue.doc_id}, {"error", issue.error},
                    {"message", issue.message}});
  }
  return j;
}

std::string make_sent_id(std::string_view doc_id, std::size_t index) {
  std::string id(doc_id);
  id.push_back('#');
  id.append(std::to_string(index));
  return id;
}

namespace {

std::vector<SentenceRecord> ingest_impl(const std::vector<SourceDocument>& docs,
                                        const std::vector<std::size_t>& lines,
                                        const IngestOptions& options, IngestReport& report) {
  report.documents_read += docs.size();

  // validation is sequential; segmentation is per document and parallel
  std::vector<std::optional<BucketKey>> buckets(docs.size());
  std::unordered_set<std::string> seen;
  std::map<LanguageCode, SentenceSegmenter> segmenters;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& doc = docs[i];
    const std::size_t line = lines.empty() ? 0 : lines[i];
    if (!options.languages.contains(doc.lang)) {
      report.record({line, doc.doc_id, "UnknownLanguage", "language '" + doc.lang.str() + "' not registered"});
      continue;
    }
    if (!seen.insert(doc.doc_id).second) {
      report.record({line, doc.doc_id, "DuplicateDocument", "doc_id already ingested"});
      continue;
    }
    buckets[i] = bucket_for(doc, options.bucketing);
    if (!buckets[i]) {
      const char* needed = options.bucketing == BucketKind::month ? "published date" : "pair_key";
      report.record({line, doc.doc_id, "MissingMetadata",
                     std::string(needed) + " required for " + std::string(to_string(options.bucketing)) +
                         " bucketing"});
      continue;
    }
    if (!segmenters.contains(doc.lang)) {
      segmenters.emplace(doc.lang, SentenceSegmenter::for_language(doc.lang, options.data_dir));
    }
  }

  std::vector<std::vector<SentenceRecord>> per_doc(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!buckets[i]) continue;
    const auto& doc = docs[i];
    const auto& segmenter = segmenters.at(doc.lang);
    const std::string text = doc.pages ? segmenter.merge_pages(*doc.pages) : *doc.text;
    auto sentences = segmenter.segment(text);
    auto& out = per_doc[i];
    out.reserve(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      out.push_back({make_sent_id(doc.doc_id, s), doc.doc_id, doc.lang, std::move(sentences[s]), *buckets[i]});
    }
  }

  std::vector<SentenceRecord> records;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!buckets[i]) {
      ++report.documents_skipped;
      continue;
    }
    ++report.documents_ingested;
    report.sentences += per_doc[i].size();
    std::move(per_doc[i].begin(), per_doc[i].end(), std::back_inserter(records));
  }
  return records;
}

}  // namespace

std::vector<SentenceRecord> ingest(const std::vector<SourceDocument>& docs, const IngestOptions& options,
                                   IngestReport& report) {
  return ingest_impl(docs, {}, options, report);
}

std::vector<SentenceRecord> ingest_jsonl(std::istream& in, const IngestOptions& options, IngestReport& report) {
  std::vector<SourceDocument> docs;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (unicode::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      docs.push_back(SourceDocument::from_json(j, options.languages));
      lines.push_back(line_no);
    } catch (const Error& e) {
      ++report.documents_read;
      ++report.documents_skipped;
      std::string doc_id;
      try {
        doc_id = nlohmann::json::parse(line).value("doc_id", "");
      } catch (...) {
      }
      report.record({line_no, doc_id, std::string(to_string(e.code())), e.what()});
    } catch (const nlohmann::json::exception& e) {
      ++report.documents_read;
      ++report.documents_skipped;
      report.record({line_no, "", "InvalidDocument", e.what()});
    }
  }
  return ingest_impl(docs, lines, options, report);
}

void write_sentences_tsv(std::ostream& out, const std::vector<SentenceRecord>& records) {
  for (const auto& r : records) {
    tsv::write_row(out, {r.sent_id, r.lang.str(), r.bucket.value, r.text});
  }
}

void write_sentences_tsv(const std::filesystem::path& path, const std::vector<SentenceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  BITEXT_CHECK(out.good(), Io, "cannot write " + path.string());
  write_sentences_tsv(out, records);
}

std::vector<SentenceRecord> read_sentences_tsv(std::istream& in, std::optional<BucketKind> kind) {
  std::vector<SentenceRecord> records;
  tsv::Reader reader(in);
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    BITEXT_CHECK(fields.size() == 4, FormatError,
                 "sentence TSV line " + std::to_string(reader.line()) + ": expected 4 columns");
    SentenceRecord r;
    r.sent_id = std::move(fields[0]);
    const auto hash = r.sent_id.rfind('#');
    r.doc_id = hash == std::string::npos ? r.sent_id : r.sent_id.substr(0, hash);
    r.lang = LanguageCode(fields[1]);
    r.bucket.value = std::move(fields[2]);
    if (kind) {
      r.bucket.kind = *kind;
    } else if (r.bucket.value == "*") {
      r.bucket.kind = BucketKind::global;
    } else {
      r.bucket.kind = looks_like_month(r.bucket.value) ? BucketKind::month : BucketKind::document_pair;
    }
    r.text = std::move(fields[3]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SentenceRecord> read_sentences_tsv(const std::filesystem::path& path, std::optional<BucketKind> kind) {
  std::ifstream in(path, std::ios::binary);
  BITEXT_CHECK(in.good(), Io, "cannot read " + path.string());
  return read_sentences_tsv(in, kind);
}

}  // namespace bitext
