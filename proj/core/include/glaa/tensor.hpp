#pragma once

#include <array>
#include <Eigen/Dense>

#include "glaa/errors.hpp"

namespace glaa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Dims = std::array<Index, 3>;

// Dense order-3 tensor of reals.
//
// Canonical layout: entry (i1, i2, i3) lives at flat offset
// (i1*p2 + i2)*p3 + i3, i.e. the last index varies fastest.
//
// Matricization convention (this pins all Kronecker identities used by the
// fitting code): the mode-k unfolding pairs the remaining two indices
// cyclically, with the second of the pair varying fastest:
//
//   mode 1:  p1 x (p2*p3),  column (i2, i3) -> i2*p3 + i3
//   mode 2:  p2 x (p3*p1),  column (i3, i1) -> i3*p1 + i1
//   mode 3:  p3 x (p1*p2),  column (i1, i2) -> i1*p2 + i2
//
// Under this ordering, T = C x1 A1 x2 A2 x3 A3 satisfies
//   unfold_k(T) = A_k * unfold_k(C) * M_k^T
// with M_1 = A2 (x) A3, M_2 = A3 (x) A1, M_3 = A1 (x) A2, where (x) is the
// Kronecker product. Note the cyclic pairing: many tensor libraries instead
// use the reversed pairing (A3 (x) A2 for mode 1); the two differ only by a
// column permutation of the unfolding.
class Tensor3 {
 public:
  Tensor3() : dims_{0, 0, 0} {}

  // Zero-initialized tensor.
  Tensor3(Index p1, Index p2, Index p3) : dims_{p1, p2, p3} {
    if (p1 <= 0 || p2 <= 0 || p3 <= 0) {
      throw DimensionError("Tensor3: dimensions must be positive");
    }
    values_ = Vector::Zero(p1 * p2 * p3);
  }

  explicit Tensor3(const Dims& d) : Tensor3(d[0], d[1], d[2]) {}

  const Dims& dims() const { return dims_; }
  Index dim(int mode) const { return dims_[mode - 1]; }
  Index size() const { return values_.size(); }

  double operator()(Index i1, Index i2, Index i3) const {
    return values_[offset(i1, i2, i3)];
  }
  double& operator()(Index i1, Index i2, Index i3) {
    return values_[offset(i1, i2, i3)];
  }

  Index offset(Index i1, Index i2, Index i3) const {
    return (i1 * dims_[1] + i2) * dims_[2] + i3;
  }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  double norm() const { return values_.norm(); }
  double squared_norm() const { return values_.squaredNorm(); }

  Tensor3& operator+=(const Tensor3& other) {
    check_same_dims(other);
    values_ += other.values_;
    return *this;
  }
  Tensor3& operator-=(const Tensor3& other) {
    check_same_dims(other);
    values_ -= other.values_;
    return *this;
  }
  Tensor3& operator*=(double c) {
    values_ *= c;
    return *this;
  }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double c, Tensor3 t) { return t *= c; }

 private:
  void check_same_dims(const Tensor3& other) const {
    if (dims_ != other.dims_) {
      throw DimensionError("Tensor3: dimension mismatch");
    }
  }

  Dims dims_;
  Vector values_;
};

// Mode-k unfolding per the class-level convention. O(p1*p2*p3).
Matrix matricize(const Tensor3& t, int mode);

// Exact inverse of matricize.
Tensor3 refold(const Matrix& m, int mode, const Dims& dims);

// Mode-k product: unfold_k(result) = m * unfold_k(t). The mode-k dimension
// becomes m.rows(); requires m.cols() == t.dim(mode).
Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode);

// acc(i,j,k) += weight * x(i) * y(j) * z(k).
void outer_accumulate(Tensor3& acc, const Vector& x, const Vector& y,
                      const Vector& z, double weight);

}  // namespace glaa
