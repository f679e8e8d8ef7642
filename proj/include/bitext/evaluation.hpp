#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/pairs.hpp"

namespace bitext {

enum class LasBand { definite_accept, marginal_accept, reject };

std::string_view to_string(LasBand band);
LasBand parse_band(std::string_view text);

/// definite: las > t + 0.1; marginal: t < las <= t + 0.1;
/// reject: t - 0.1 <= las <= t; nothing below t - 0.1.
std::optional<LasBand> classify_band(double las, double threshold);

struct AnnotationSample {
  std::string sample_id;
  std::size_t batch_id = 0;
  LasBand band = LasBand::reject;
  CandidatePair pair;
};

struct SamplingOptions {
  double threshold = 0.75;
  std::size_t n_per_band = 100;
  std::uint64_t seed = 0;
  std::size_t batch_size = 30;
  std::string id_prefix;  // sample ids are <prefix><index>
};

struct SamplingReport {
  std::map<std::string, std::size_t> available;
  std::map<std::string, std::size_t> drawn;
  std::size_t batches = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Draws up to n_per_band pairs per band without replacement, shuffles the
/// union and packs it into batches. Shortfalls are reported, not thrown.
std::vector<AnnotationSample> stratified_sample(const std::vector<CandidatePair>& pairs,
                                                const SamplingOptions& options, SamplingReport* report = nullptr);

/// Rank correlation with average ranks for ties. Throws LengthMismatch,
/// InvalidArgument (fewer than 2 points) or DegenerateInput (a constant series).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct Annotation {
  std::string sample_id;
  std::string annotator_id;
  int sts = 0;  // 0..5
};

/// Per-language and overall statistics in the layout of the annotation
/// results table. Band means and medians are over individual annotations;
/// correlations, accuracy and agreement treat each sample as one point,
/// scored by the mean of its annotations.
nlohmann::json analysis_report(const std::vector<AnnotationSample>& samples,
                               const std::vector<Annotation>& annotations);

/// Fixed-width text rendering of analysis_report output.
std::string render_analysis_table(const nlohmann::json& report);

/// Annotator-facing CSV: sample_id,batch_id,src_text,tgt_text.
void write_annotation_csv(std::ostream& out, const std::vector<AnnotationSample>& samples);
/// Everything needed to rebuild the samples, bands and scores included.
void write_sample_key_csv(std::ostream& out, const std::vector<AnnotationSample>& samples);
std::vector<AnnotationSample> read_sample_key_csv(std::istream& in);
/// sample_id,annotator_id,sts with a header row.
std::vector<Annotation> read_annotations_csv(std::istream& in);
void write_annotations_csv(std::ostream& out, const std::vector<Annotation>& annotations);

namespace csv {
/// RFC 4180 field quoting.
std::string quote(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);
/// Reads one record (quoted fields may span lines); false at end of input.
bool read_row(std::istream& in, std::vector<std::string>& fields);
}  // namespace csv

}  // namespace bitext
