#pragma once

#include <cstdint>
#include <random>

namespace glaa {

// splitmix64 mixing step; used to derive decorrelated child seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Child seed for item `index` of a seeded sweep.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Seeded random generator used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard, uniforms take the top 53 bits, and normal deviates go through
// the inverse CDF, so a given seed reproduces the same stream on any
// platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Child stream for one replication of a seeded sweep. Replication r of a
  // run with base seed s always sees stream_for(s, r), so any single
  // replication can be reproduced in isolation.
  static Rng stream_for(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(derive_seed(base_seed, index));
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via inverse CDF of uniform().
  double normal();

  // Uniform integer on [0, upper); rejection sampling, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t upper);

 private:
  std::mt19937_64 engine_;
};

}  // namespace glaa
