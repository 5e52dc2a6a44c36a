#pragma once

// Plain comma-separated text I/O. Numbers are written in the shortest form
// that reads back to the identical double.

#include <string>
#include <string_view>
#include <vector>

#include "dmdsep/linalg.hpp"

namespace dmdsep::csv {

/// Time-major numeric table: one row per line, one column per field.
struct NumericTable {
  Matrix values;  // rows x cols; empty cells hold 0
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> observed;
  Index missing = 0;
};

/// Header line plus string fields for each data row.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position of `name`; throws ValidationError naming it if absent.
  std::size_t column(std::string_view name) const;
};

std::string format_double(double v);

/// Parses a full field as a double; returns false on any trailing text.
bool parse_double(std::string_view field, double& out);

std::vector<std::string> split_line(std::string_view line);

/// Empty cells are accepted only when allow_missing is set. Blank lines are
/// skipped. Errors name the 1-based line number.
NumericTable read_numeric(const std::string& path, bool allow_missing);

TextTable read_text(const std::string& path);

void write_matrix(const std::string& path, const Matrix& m);
void write_matrix(const std::string& path, const Matrix& m, const std::vector<std::string>& header);

}  // namespace dmdsep::csv
