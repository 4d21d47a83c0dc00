#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace fracschrod::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
std::string format_size(std::size_t v);

/// "# key = value" lines, then a header and rows, written in one go so a
/// failed run never leaves a partial table.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value) { comment(key, format_double(value)); }
  void row(std::vector<std::string> cells);

  void write(std::ostream& out) const;

private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to path, or stdout for "-".
void write_output(const std::string& path, const CsvTable& table);

} // namespace fracschrod::cli
