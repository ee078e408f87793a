#include "glaa/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace glaa {

namespace {

void fix_column_signs(Matrix& u) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index imax = 0;
    u.col(j).cwiseAbs().maxCoeff(&imax);
    if (u(imax, j) < 0.0) u.col(j) = -u.col(j);
  }
}

}  // namespace

std::pair<Matrix, Vector> top_left_singular_with_values(const Matrix& m,
                                                        Index r) {
  if (r < 1 || r > std::min(m.rows(), m.cols())) {
    throw DimensionError(
        "top_left_singular: r must satisfy 1 <= r <= min(rows, cols)");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  Matrix u = svd.matrixU().leftCols(r);
  fix_column_signs(u);
  return {std::move(u), svd.singularValues().head(r)};
}

Matrix top_left_singular(const Matrix& m, Index r) {
  return top_left_singular_with_values(m, r).first;
}

Matrix projection(const Matrix& g) {
  const Matrix gram = g.transpose() * g;
  const Matrix eye = Matrix::Identity(g.cols(), g.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() <= 1e-8) {
    return g * g.transpose();
  }
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible()) {
    throw NumericError("projection: basis is rank deficient");
  }
  return g * lu.solve(g.transpose());
}

Matrix orthonormalize(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  return q;
}

Matrix sym_sqrt(const Matrix& s, double tol) {
  if (s.rows() != s.cols()) throw DimensionError("sym_sqrt: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) {
    throw NumericError("sym_sqrt: eigendecomposition failed");
  }
  Vector w = es.eigenvalues();
  if (w.minCoeff() < -tol) {
    throw NumericError("sym_sqrt: matrix is not positive semidefinite");
  }
  for (Index i = 0; i < w.size(); ++i) w[i] = std::sqrt(std::max(w[i], 0.0));
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return r;
}

}  // namespace glaa
