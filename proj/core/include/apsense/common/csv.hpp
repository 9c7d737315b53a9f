#pragma once

#include <string>
#include <vector>

namespace apsense::csv {

/// Parsed CSV table. The header row is kept separate; all cells are strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, matched case-insensitively. -1 if absent.
  int column(const std::string& name) const;
};

/// Split a single CSV line. Handles double-quoted fields with embedded
/// commas and "" escapes; no multi-line fields.
std::vector<std::string> split_line(const std::string& line);

Table read_file(const std::string& path);
Table parse(const std::string& text);

std::string join_row(const std::vector<std::string>& cells);

/// Shortest round-trip decimal form (std::to_chars), so numeric output
/// is byte-stable across runs and platforms.
std::string format_double(double v);

}  // namespace apsense::csv
