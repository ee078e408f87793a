#include <benchmark/benchmark.h>

#include "glaa/rng.hpp"
#include "glaa/tensor.hpp"

namespace {

using namespace glaa;

Tensor3 random_tensor(Index p1, Index p2, Index p3, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(p1, p2, p3);
  for (Index i = 0; i < t.size(); ++i) t.values()[i] = rng.normal();
  return t;
}

void BM_matricize(benchmark::State& state) {
  const int mode = static_cast<int>(state.range(0));
  const Tensor3 t = random_tensor(100, 100, 20, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(matricize(t, mode));
  }
}
BENCHMARK(BM_matricize)->Arg(1)->Arg(2)->Arg(3);

void BM_mode_product(benchmark::State& state) {
  const int mode = static_cast<int>(state.range(0));
  const Tensor3 t = random_tensor(100, 100, 20, 2);
  Rng rng(3);
  Matrix m(2, t.dim(mode));
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mode_product(t, m, mode));
  }
}
BENCHMARK(BM_mode_product)->Arg(1)->Arg(2)->Arg(3);

void BM_outer_accumulate(benchmark::State& state) {
  Tensor3 acc(100, 100, 20);
  Rng rng(4);
  Vector x(100), y(100), z(20);
  for (Index i = 0; i < 100; ++i) x[i] = rng.normal();
  for (Index i = 0; i < 100; ++i) y[i] = rng.normal();
  for (Index i = 0; i < 20; ++i) z[i] = rng.normal();
  for (auto _ : state) {
    outer_accumulate(acc, x, y, z, 1e-3);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_outer_accumulate);

}  // namespace

BENCHMARK_MAIN();
