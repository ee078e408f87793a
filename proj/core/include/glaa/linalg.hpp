#pragma once

#include "glaa/tensor.hpp"

namespace glaa {

// Leading r left singular vectors of m, as an m.rows() x r matrix with
// orthonormal columns. Column signs are fixed by making the entry of
// largest magnitude in each column positive (first such entry on ties), so
// results are deterministic across runs.
Matrix top_left_singular(const Matrix& m, Index r);

// Same, also returning the top-r singular values.
std::pair<Matrix, Vector> top_left_singular_with_values(const Matrix& m,
                                                        Index r);

// Projection matrix onto span(g). Uses g * g^T when the columns are
// orthonormal to within 1e-8, otherwise the general form
// g (g^T g)^{-1} g^T; throws NumericError when g^T g is singular.
Matrix projection(const Matrix& g);

// Thin-QR orthonormal basis of span(g).
Matrix orthonormalize(const Matrix& g);

// Symmetric PSD square root via eigendecomposition. Throws NumericError if
// the smallest eigenvalue is below -tol; negative eigenvalues within tol are
// clamped to zero.
Matrix sym_sqrt(const Matrix& s, double tol = 1e-10);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& s);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace glaa
