#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/language.hpp"

namespace bitext {

/// Calendar date; only year and month matter for bucketing.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  /// Accepts "YYYY-MM-DD", "YYYY-MM" or an ISO timestamp starting with a date.
  static std::optional<Date> parse(std::string_view text);
  std::string month_key() const;  // "YYYY-MM"
};

struct SourceDocument {
  std::string doc_id;
  LanguageCode lang;
  std::optional<std::string> text;
  std::optional<std::vector<std::string>> pages;  // OCR mode
  std::string source;
  std::optional<Date> published;
  std::optional<std::string> pair_key;

  /// Throws InvalidDocument / UnknownLanguage.
  static SourceDocument from_json(const nlohmann::json& j, const LanguageSet& languages);
  nlohmann::json to_json() const;
};

enum class BucketKind { month, document_pair, global };

std::string_view to_string(BucketKind kind);
BucketKind parse_bucket_kind(std::string_view text);

struct BucketKey {
  BucketKind kind = BucketKind::global;
  std::string value = "*";

  friend bool operator==(const BucketKey&, const BucketKey&) = default;
};

struct SentenceRecord {
  std::string sent_id;
  std::string doc_id;
  LanguageCode lang;
  std::string text;
  BucketKey bucket;
};

struct IngestIssue {
  std::size_t line = 0;  // 1-based input line, 0 when not from a file
  std::string doc_id;
  std::string error;
  std::string message;
};

struct IngestReport {
  std::size_t documents_read = 0;
  std::size_t documents_ingested = 0;
  std::size_t documents_skipped = 0;
  std::size_t sentences = 0;
  std::map<std::string, std::size_t> error_counts;
  std::vector<IngestIssue> issues;

  void record(IngestIssue issue);
  nlohmann::json to_json() const;
};

struct IngestOptions {
  BucketKind bucketing = BucketKind::global;
  LanguageSet languages = LanguageSet::defaults();
  std::filesystem::path data_dir;  // prefix-list overrides
};

/// Segments and buckets documents. Documents lacking the metadata the
/// bucketing needs, or repeating a doc_id, are skipped and reported.
/// Output order follows input order; sent_id is "<doc_id>#<n>".
std::vector<SentenceRecord> ingest(const std::vector<SourceDocument>& docs, const IngestOptions& options,
                                   IngestReport& report);

/// JSON-lines variant; malformed lines are reported and skipped.
std::vector<SentenceRecord> ingest_jsonl(std::istream& in, const IngestOptions& options, IngestReport& report);

std::string make_sent_id(std::string_view doc_id, std::size_t index);

/// `sent_id \t lang \t bucket \t text`
void write_sentences_tsv(std::ostream& out, const std::vector<SentenceRecord>& records);
void write_sentences_tsv(const std::filesystem::path& path, const std::vector<SentenceRecord>& records);

/// Bucket kind is inferred from the value unless given.
std::vector<SentenceRecord> read_sentences_tsv(std::istream& in, std::optional<BucketKind> kind = std::nullopt);
std::vector<SentenceRecord> read_sentences_tsv(const std::filesystem::path& path,
                                               std::optional<BucketKind> kind = std::nullopt);

}  // namespace bitext
