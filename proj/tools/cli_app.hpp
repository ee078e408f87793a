#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "glaa/tensor.hpp"

namespace glaa::cli {

// Exit codes; each failure class is distinct so scripts can branch on them.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags, rejected before any file is read
  kParse = 3,      // unreadable or malformed input file
  kDimension = 4,  // inconsistent shapes between inputs
  kConfig = 5,     // configuration incompatible with the data (rank > dim)
  kNumeric = 6,    // numerical failure (non-PD covariance, ...)
  kIo = 7,         // output could not be written
};

// Entry point used by main() and by tests; argv-style, without argv[0].
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

// JSON encodings shared by result documents and tests.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json tensor_to_json(const Tensor3& t);
Tensor3 tensor_from_json(const nlohmann::json& j);

}  // namespace glaa::cli
