#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/config.hpp"

namespace bitext {

enum class Stage { ingest, embed, index, mine, refine, pivot, sample };

inline constexpr Stage kStages[] = {Stage::ingest, Stage::embed,  Stage::index, Stage::mine,
                                    Stage::refine, Stage::pivot, Stage::sample};

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);  // throws InvalidArgument

struct PipelineOptions {
  std::optional<Stage> until;  // last stage to run
  bool force = false;          // ignore the manifest and rerun everything
  std::ostream* log = nullptr;
};

struct PipelineResult {
  std::vector<std::string> executed;
  std::vector<std::string> resumed;  // skipped because the manifest matched
  nlohmann::json manifest;
};

/// FNV-1a digest of a file's bytes as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Runs the stages in order. Each stage records its input digests,
/// parameters, counts and output digests in <out_dir>/manifest.json; a stage
/// whose recorded entry still matches is not rerun. A failing stage raises
/// StageFailure naming it, after marking it failed in the manifest; earlier
/// outputs are left in place. Invalid configuration raises ConfigError
/// before anything runs.
PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options = {});

/// Output locations inside a run directory.
namespace layout {
std::filesystem::path sentences(const std::filesystem::path& out, const LanguageCode& lang);
std::filesystem::path fetched_embeddings(const std::filesystem::path& out, const LanguageCode& lang);
std::filesystem::path index_file(const std::filesystem::path& out);
std::filesystem::path mined_pairs(const std::filesystem::path& out, const LanguageCode& lang);
std::filesystem::path near_pairs(const std::filesystem::path& out, const LanguageCode& lang);
std::filesystem::path refined_pairs(const std::filesystem::path& out, const LanguageCode& lang);
std::filesystem::path pivot_pairs(const std::filesystem::path& out, const LanguageCode& a, const LanguageCode& b);
std::filesystem::path annotation_csv(const std::filesystem::path& out);
std::filesystem::path sample_key_csv(const std::filesystem::path& out);
std::filesystem::path manifest(const std::filesystem::path& out);
}  // namespace layout

}  // namespace bitext
