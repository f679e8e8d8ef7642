#pragma once

#include <initializer_list>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Tab-separated rows. Fields never contain tabs or newlines: writers replace
// them with spaces.

namespace bitext::tsv {

inline void write_field(std::ostream& out, std::string_view field) {
  for (const char c : field) out.put(c == '\t' || c == '\n' || c == '\r' ? ' ' : c);
}

inline void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (const auto field : fields) {
    if (!first) out.put('\t');
    write_field(out, field);
    first = false;
  }
  out.put('\n');
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  bool first = true;
  for (const auto& field : fields) {
    if (!first) out.put('\t');
    write_field(out, field);
    first = false;
  }
  out.put('\n');
}

inline void split(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next nonempty row; false at end of input.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      split(line, fields);
      return true;
    }
    return false;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace bitext::tsv
