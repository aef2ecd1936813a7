#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace sld::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

constexpr int kCsvSchemaVersion = 1;

/// Fewest significant digits (15 to 17) that round-trip through strtod;
/// nan, inf and -inf for non-finite values.
std::string format_double(double v);

/// `# sld-csv v1 experiment=<name>`, then the header row, then the rows.
void write_csv(std::ostream& os, const CsvTable& table);

}  // namespace sld::cli
