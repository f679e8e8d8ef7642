#include "bitext/resources.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace bitext::resources {

std::optional<std::string> load(std::string_view name, const std::filesystem::path& data_dir) {
  if (!data_dir.empty()) {
    const auto path = data_dir / std::filesystem::path(std::string(name));
    if (std::filesystem::is_regular_file(path)) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  for (const auto& file : detail::embedded_files()) {
    if (file.name == name) return std::string(file.content);
  }
  return std::nullopt;
}

std::vector<std::string> list(std::string_view prefix, const std::filesystem::path& data_dir) {
  std::set<std::string> names;
  for (const auto& file : detail::embedded_files()) {
    if (file.name.starts_with(prefix)) names.emplace(file.name);
  }
  if (!data_dir.empty()) {
    const auto dir = data_dir / std::filesystem::path(std::string(prefix));
    if (std::filesystem::is_directory(dir)) {
      for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        names.emplace(std::string(prefix) + entry.path().filename().string());
      }
    }
  }
  return {names.begin(), names.end()};
}

}  // namespace bitext::resources
