#include "doctest.h"

#include "glaa/linalg.hpp"
#include "glaa/tensor.hpp"
#include "test_support.hpp"

using namespace glaa;

namespace {

// Independent index-map oracle for the unfolding convention: mode-k rows
// index mode k, columns pair the remaining modes cyclically with the second
// varying fastest.
std::pair<Index, Index> oracle_position(int mode, Index i1, Index i2,
                                        Index i3, const Dims& d) {
  switch (mode) {
    case 1: return {i1, i2 * d[2] + i3};
    case 2: return {i2, i3 * d[0] + i1};
    default: return {i3, i1 * d[1] + i2};
  }
}

Matrix oracle_matricize(const Tensor3& t, int mode) {
  const Dims& d = t.dims();
  const Index rows = d[mode - 1];
  Matrix m = Matrix::Zero(rows, t.size() / rows);
  for (Index i1 = 0; i1 < d[0]; ++i1) {
    for (Index i2 = 0; i2 < d[1]; ++i2) {
      for (Index i3 = 0; i3 < d[2]; ++i3) {
        auto [r, c] = oracle_position(mode, i1, i2, i3, d);
        m(r, c) = t(i1, i2, i3);
      }
    }
  }
  return m;
}

Tensor3 counting_tensor() {
  Tensor3 t(2, 2, 2);
  double v = 1.0;
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      for (Index k = 0; k < 2; ++k) t(i, j, k) = v++;
    }
  }
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("tensor");

TEST_CASE("matricize zero tensor") {
  Tensor3 t(2, 2, 2);
  for (int mode = 1; mode <= 3; ++mode) {
    const Matrix m = matricize(t, mode);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 4);
    CHECK(m.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matricize corner entry maps to corner") {
  Tensor3 t(3, 4, 5);
  t(0, 0, 0) = 1.0;
  for (int mode = 1; mode <= 3; ++mode) {
    const Matrix m = matricize(t, mode);
    CHECK(m(0, 0) == 1.0);
    CHECK(m.cwiseAbs().sum() == 1.0);
  }
}

TEST_CASE("matricize matches frozen 2x2x2 enumeration") {
  const Tensor3 t = counting_tensor();
  Matrix m1(2, 4), m2(2, 4), m3(2, 4);
  m1 << 1, 2, 3, 4, 5, 6, 7, 8;
  m2 << 1, 5, 2, 6, 3, 7, 4, 8;
  m3 << 1, 3, 5, 7, 2, 4, 6, 8;
  CHECK(matricize(t, 1) == m1);
  CHECK(matricize(t, 2) == m2);
  CHECK(matricize(t, 3) == m3);
}

TEST_CASE("matricize matches the index-map oracle on random tensors") {
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const Tensor3 t = glaa::testing::random_tensor(rng, 4, 3, 5);
    for (int mode = 1; mode <= 3; ++mode) {
      CHECK((matricize(t, mode) - oracle_matricize(t, mode))
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("matricize preserves the Frobenius norm") {
  Rng rng(12);
  const Tensor3 t = glaa::testing::random_tensor(rng, 6, 2, 7);
  for (int mode = 1; mode <= 3; ++mode) {
    CHECK(matricize(t, mode).norm() ==
          doctest::Approx(t.norm()).epsilon(1e-12));
  }
}

TEST_CASE("refold inverts matricize in all modes") {
  Rng rng(13);
  const Tensor3 t = glaa::testing::random_tensor(rng, 5, 4, 3);
  for (int mode = 1; mode <= 3; ++mode) {
    const Tensor3 back = refold(matricize(t, mode), mode, t.dims());
    CHECK((back.values() - t.values()).cwiseAbs().maxCoeff() == 0.0);
  }
  const Tensor3 z = refold(Matrix::Zero(4, 15), 2, {5, 4, 3});
  CHECK(z.norm() == 0.0);
  CHECK(z.dims() == Dims{5, 4, 3});
}

TEST_CASE("refold round-trips the counting tensor") {
  const Tensor3 t = counting_tensor();
  for (int mode = 1; mode <= 3; ++mode) {
    CHECK(refold(oracle_matricize(t, mode), mode, t.dims()).values() ==
          t.values());
  }
}

TEST_CASE("refold rejects inconsistent shapes") {
  CHECK_THROWS_AS(refold(Matrix::Zero(2, 5), 1, {2, 2, 2}), DimensionError);
}

TEST_CASE("mode_product identity and zero") {
  Rng rng(14);
  const Tensor3 t = glaa::testing::random_tensor(rng, 3, 4, 2);
  for (int mode = 1; mode <= 3; ++mode) {
    const Index pk = t.dims()[mode - 1];
    const Tensor3 same = mode_product(t, Matrix::Identity(pk, pk), mode);
    CHECK((same.values() - t.values()).cwiseAbs().maxCoeff() < 1e-15);
    const Tensor3 zero = mode_product(t, Matrix::Zero(2, pk), mode);
    CHECK(zero.norm() == 0.0);
    CHECK(zero.dims()[mode - 1] == 2);
  }
}

TEST_CASE("mode_product matches direct summation") {
  Rng rng(15);
  const Tensor3 t = glaa::testing::random_tensor(rng, 2, 2, 2);
  Matrix d(2, 2);
  d << 2, 0, 0, 3;
  const Tensor3 scaled = mode_product(t, d, 1);
  for (Index j = 0; j < 2; ++j) {
    for (Index k = 0; k < 2; ++k) {
      CHECK(scaled(0, j, k) == doctest::Approx(2 * t(0, j, k)));
      CHECK(scaled(1, j, k) == doctest::Approx(3 * t(1, j, k)));
    }
  }

  // a non-square map against the summation oracle
  const Matrix m = glaa::testing::random_matrix(rng, 4, 2);
  for (int mode = 1; mode <= 3; ++mode) {
    const Tensor3 r = mode_product(t, m, mode);
    Dims d2 = t.dims();
    d2[mode - 1] = 4;
    for (Index i1 = 0; i1 < d2[0]; ++i1) {
      for (Index i2 = 0; i2 < d2[1]; ++i2) {
        for (Index i3 = 0; i3 < d2[2]; ++i3) {
          double expect = 0.0;
          for (Index j = 0; j < 2; ++j) {
            Index a = i1, b = i2, c = i3;
            if (mode == 1) a = j;
            if (mode == 2) b = j;
            if (mode == 3) c = j;
            const Index row = mode == 1 ? i1 : mode == 2 ? i2 : i3;
            expect += m(row, j) * t(a, b, c);
          }
          CHECK(r(i1, i2, i3) == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("mode_product on distinct modes commutes") {
  Rng rng(16);
  const Tensor3 t = glaa::testing::random_tensor(rng, 4, 5, 3);
  const Matrix a = glaa::testing::random_matrix(rng, 2, 4);
  const Matrix b = glaa::testing::random_matrix(rng, 6, 5);
  const Tensor3 ab = mode_product(mode_product(t, a, 1), b, 2);
  const Tensor3 ba = mode_product(mode_product(t, b, 2), a, 1);
  CHECK((ab.values() - ba.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode_product rejects mismatched shapes") {
  Tensor3 t(2, 3, 4);
  CHECK_THROWS_AS(mode_product(t, Matrix::Zero(2, 5), 1), DimensionError);
}

TEST_CASE("outer_accumulate") {
  Tensor3 acc(1, 1, 1);
  Vector x1(1), y1(1), z1(1);
  x1 << 1;
  y1 << 2;
  z1 << 3;
  outer_accumulate(acc, x1, y1, z1, 1.0);
  CHECK(acc(0, 0, 0) == 6.0);
  outer_accumulate(acc, Vector::Zero(1), Vector::Zero(1), Vector::Zero(1),
                   5.0);
  CHECK(acc(0, 0, 0) == 6.0);

  Rng rng(17);
  Tensor3 t(3, 4, 2);
  const Vector x = glaa::testing::random_vector(rng, 3);
  const Vector y = glaa::testing::random_vector(rng, 4);
  const Vector z = glaa::testing::random_vector(rng, 2);
  outer_accumulate(t, x, y, z, 0.7);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 4; ++j) {
      for (Index k = 0; k < 2; ++k) {
        CHECK(t(i, j, k) ==
              doctest::Approx(0.7 * x[i] * y[j] * z[k]).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(outer_accumulate(t, x, y, Vector::Zero(3), 1.0),
                  DimensionError);
}

TEST_CASE("tucker consistency pins the unfolding convention") {
  Rng rng(18);
  for (int rep = 0; rep < 10; ++rep) {
    const Dims p{5, 4, 3};
    const std::array<Index, 3> r{2, 2, 2};
    Tensor3 core = glaa::testing::random_tensor(rng, r[0], r[1], r[2]);
    std::array<Matrix, 3> g;
    for (int k = 0; k < 3; ++k) {
      g[k] = glaa::testing::random_orthonormal(rng, p[k], r[k]);
    }
    Tensor3 t = core;
    for (int k = 1; k <= 3; ++k) t = mode_product(t, g[k - 1], k);

    const std::array<Matrix, 3> companions = {kron(g[1], g[2]),
                                              kron(g[2], g[0]),
                                              kron(g[0], g[1])};
    for (int k = 1; k <= 3; ++k) {
      const Matrix lhs = matricize(t, k);
      const Matrix rhs =
          g[k - 1] * matricize(core, k) * companions[k - 1].transpose();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_SUITE_END();
