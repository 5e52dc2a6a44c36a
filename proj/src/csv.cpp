#include "dmdsep/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dmdsep::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::size_t TextTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("missing column '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

NumericTable read_numeric(const std::string& path, bool allow_missing) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  Index missing = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (rows.empty()) {
      width = fields.size();
    } else if (fields.size() != width) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << width << " fields, found " << fields.size();
      throw ValidationError(msg.str());
    }
    std::vector<double> values(width, 0.0);
    std::vector<bool> obs(width, true);
    for (std::size_t c = 0; c < width; ++c) {
      if (fields[c].empty()) {
        if (!allow_missing) {
          std::ostringstream msg;
          msg << path << ":" << line_no << ": empty cell in column " << c + 1
              << " (missing values need --fill-missing)";
          throw ValidationError(msg.str());
        }
        obs[c] = false;
        ++missing;
        continue;
      }
      if (!parse_double(fields[c], values[c]) || !std::isfinite(values[c])) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": non-numeric cell '" << fields[c] << "' in column " << c + 1;
        throw ValidationError(msg.str());
      }
    }
    rows.push_back(std::move(values));
    seen.push_back(std::move(obs));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");

  NumericTable table;
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(width);
  table.values.resize(r, c);
  table.observed.resize(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      table.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      table.observed(i, j) = seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  table.missing = missing;
  return table;
}

TextTable read_text(const std::string& path) {
  std::ifstream in = open_input(path);
  TextTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << table.header.size() << " fields, found "
          << fields.size();
      throw ValidationError(msg.str());
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw ValidationError(path + ": file is empty");
  return table;
}

void write_matrix(const std::string& path, const Matrix& m) { write_matrix(path, m, {}); }

void write_matrix(const std::string& path, const Matrix& m, const std::vector<std::string>& header) {
  std::ofstream out = open_output(path);
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

}  // namespace dmdsep::csv
