#pragma once

#include "glaa/estimator.hpp"

namespace glaa {

// Normal score transform: value i becomes Phi^{-1}(rank_i / (n+1)) with
// average ranks for ties. Throws NumericError for a constant column.
Vector normal_score(const Vector& z_col);

// Entrywise sample liquid-association tensor: x and y columns standardized
// (mean 0, variance 1 with denominator n-1), z columns normal-score
// transformed, then phi(i,j,k) = n^{-1} sum_m x(m,i) y(m,j) zeta(m,k).
// Throws NumericError for a zero-variance x or y column.
Tensor3 ula_tensor(const Dataset& dataset);

struct UlaEstimate {
  Tensor3 phi_tilde;
  std::array<Matrix, 3> gamma;
  // Per mode, all p_k row indices sorted by descending l2-norm of the rows
  // of unfold_k(phi_tilde); ties go to the smaller index. Callers truncate
  // at the oracle sparsity s_k for selection scoring.
  std::array<std::vector<Index>, 3> ranked_rows;
};

// Plain per-mode SVD of the LA tensor plus the norm ranking.
UlaEstimate ula_estimate(const Tensor3& phi_tilde,
                         const std::array<Index, 3>& ranks);

}  // namespace glaa
