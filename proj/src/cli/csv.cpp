#include "cli/csv.hpp"

#include "fracschrod/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

namespace fracschrod::cli {

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_size(std::size_t v) { return std::to_string(v); }

void CsvTable::comment(const std::string& key, const std::string& value) {
  comments_.push_back("# " + key + " = " + value);
}

void CsvTable::row(std::vector<std::string> cells) {
  require(cells.size() == columns_.size(), "CSV row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& c : comments_) {
    out << c << '\n';
  }
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) {
    line(r);
  }
}

void write_output(const std::string& path, const CsvTable& table) {
  if (path == "-") {
    table.write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path);
  if (!file) {
    throw InvalidArgument("cannot open output file " + path);
  }
  table.write(file);
}

} // namespace fracschrod::cli
