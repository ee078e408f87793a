#pragma once

#include <vector>

#include "glaa/simulation.hpp"

namespace glaa {

// TPR = |truth ∩ estimate| / s,  FPR = |estimate \ truth| / (p - s).
// Requires s >= 1 and p > s; input sets are 0-based sorted indices.
std::pair<double, double> tpr_fpr(const IndexSet& truth,
                                  const IndexSet& estimate, Index p, Index s);

// || P_true - P_hat ||_F / sqrt(2 r) with r = gamma_true.cols(); bases are
// orthonormalized first when needed. In [0, 1], 0 iff equal spans. Throws
// DimensionError when the column counts differ.
double subspace_distance(const Matrix& gamma_true, const Matrix& gamma_hat,
                         Index r);

struct MetricsReport {
  std::array<double, 3> tpr{0, 0, 0};
  std::array<double, 3> fpr{0, 0, 0};
  std::array<double, 3> d_per_mode{0, 0, 0};
  double d_avg = 0.0;
};

struct SubspaceEstimate {
  std::array<Matrix, 3> gamma;
  std::array<IndexSet, 3> active;
};

// Per-mode TPR/FPR and subspace distances, with d_avg the mean of the
// distances over `modes` (1-based, non-empty). Modes with p_k == s_k have
// no inactive variables; their FPR is reported as 0.
MetricsReport evaluate(const SubspaceEstimate& estimate,
                       const GroundTruth& truth, const std::vector<int>& modes);

}  // namespace glaa
