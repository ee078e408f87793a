#pragma once

#include <string>

#include "glaa/tensor.hpp"

namespace glaa {

// Reads a numeric CSV into a matrix: comma-separated, '.' decimal point,
// one observation per row. A single non-numeric first row is treated as a
// header and skipped. Throws ParseError on malformed or ragged input.
Matrix read_csv_matrix(const std::string& path);

// Shortest fixed format that round-trips a double (17 significant digits).
std::string format_double(double v);

}  // namespace glaa
