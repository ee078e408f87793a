#include "glaa/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <vector>

namespace glaa {

namespace {

// Splits a CSV line; no quoting, fields are plain numbers or labels.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // Trim blanks and a trailing CR from Windows line endings.
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ' ||
                              field.back() == '\t')) {
      field.pop_back();
    }
    std::size_t lead = 0;
    while (lead < field.size() && (field[lead] == ' ' || field[lead] == '\t')) {
      ++lead;
    }
    fields.push_back(field.substr(lead));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& s, double* out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end && !s.empty();
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  Index cols = -1;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], &row[j])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first_content_row) {
        first_content_row = false;  // header row
        continue;
      }
      throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                       ": non-numeric field");
    }
    first_content_row = false;
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != cols) {
      throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                       ": expected " + std::to_string(cols) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("'" + path + "' contains no data rows");

  Matrix m(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace glaa
