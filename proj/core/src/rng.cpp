#include "glaa/rng.hpp"

#include "glaa/errors.hpp"
#include "glaa/stats.hpp"

namespace glaa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double Rng::normal() {
  // uniform() can return exactly 0; nudge into the open interval.
  double u = uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  return normal_quantile(u);
}

std::uint64_t Rng::uniform_int(std::uint64_t upper) {
  if (upper == 0) throw ValueError("uniform_int: upper must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % upper;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % upper;
}

}  // namespace glaa
