#pragma once

#include <stdexcept>
#include <string>

namespace glaa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shapes or index ranges do not conform.
struct DimensionError : Error {
  using Error::Error;
};

// An argument value is outside its documented domain.
struct ValueError : Error {
  using Error::Error;
};

// A numerically required property failed (non-PD matrix, degenerate input).
struct NumericError : Error {
  using Error::Error;
};

// Malformed external input (CSV and friends).
struct ParseError : Error {
  using Error::Error;
};

}  // namespace glaa
