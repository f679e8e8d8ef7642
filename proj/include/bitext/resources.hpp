#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Default linguistic data (non-breaking prefix lists, language-id seed text).
// Each file is compiled into the library; a data directory given at runtime
// takes precedence file by file.

namespace bitext::resources {

namespace detail {
struct EmbeddedFile {
  std::string_view name;
  std::string_view content;
};
const std::vector<EmbeddedFile>& embedded_files();
}  // namespace detail

/// Contents of `name` (e.g. "nonbreaking_prefixes/en.txt"), preferring
/// `data_dir/name` when that file exists.
std::optional<std::string> load(std::string_view name, const std::filesystem::path& data_dir = {});

/// Names of resources under `prefix`, embedded and on disk.
std::vector<std::string> list(std::string_view prefix, const std::filesystem::path& data_dir = {});

}  // namespace bitext::resources
