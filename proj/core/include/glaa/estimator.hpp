#pragma once

#include <vector>

#include "glaa/tensor.hpp"

namespace glaa {

// Sorted, 0-based variable indices of one mode's active set.
using IndexSet = std::vector<Index>;

// Three aligned observation matrices over the same n subjects:
// x is n x p1, y is n x p2, z is n x p3.
struct Dataset {
  Matrix x, y, z;
  bool centered = false;

  Index n() const { return x.rows(); }
  Dims p() const { return {x.cols(), y.cols(), z.cols()}; }

  // Throws DimensionError unless the row counts agree.
  void validate() const;
};

// Column-centers each block; requires n >= 2.
Dataset center(Dataset d);

// Third-moment tensor  delta(i,j,k) = n^{-1} sum_m x(m,i) y(m,j) z(m,k).
// Requires dataset.centered; refuses to center silently.
Tensor3 sample_delta(const Dataset& dataset);

struct GlaaConfig {
  std::array<Index, 3> ranks{1, 1, 1};
  // Initialization thresholds, compared against row max-norms.
  std::array<double, 3> eta{0.0, 0.0, 0.0};
  // Iteration thresholds, compared against squared row l2-norms.
  std::array<double, 3> eta_tilde{0.0, 0.0, 0.0};
  int max_iter = 100;
  double tol = 1e-6;

  // Throws unless 1 <= r_k <= p_k, r_k <= prod of the other two ranks,
  // max_iter >= 1, tol > 0, and thresholds are nonnegative.
  void validate(const Dims& dims) const;
};

// State shared between the initialization and the iterations: per-mode
// active sets, basis matrices (p_k x r_k, orthonormal columns, exact zeros
// off the active set), and the retained singular values.
struct FactorState {
  std::array<IndexSet, 3> active;
  std::array<Matrix, 3> gamma;
  std::array<Vector, 3> singular_values;
  // True where thresholding left fewer than r_k rows and the largest-
  // criterion rows were retained instead.
  std::array<bool, 3> fallback{false, false, false};

  // l2-norm of the concatenated singular values; the stopping statistic.
  double singular_value_norm() const;
};

// Initial screening: active_k = { j : ||row j of unfold_k(delta)||_max >
// eta_k }, then gamma_k = top-r_k left singular vectors of the row/column
// masked unfolding. Masking preserves dimensions (p_k rows), with rows off
// the active set exactly zero.
FactorState initialize(const Tensor3& delta, const GlaaConfig& config);

// One sweep of the alternating update, modes in order 1, 2, 3, each using
// the freshest available bases of the other modes. For each mode:
// active_k = { j : ||row j of unfold_k(delta) * gamma_(-k)||_2^2 >
// eta_tilde_k }, then gamma_k from the SVD of the row-masked projected
// unfolding.
FactorState iterate_step(const Tensor3& delta,
                         const std::array<Matrix, 3>& gamma,
                         const GlaaConfig& config);

struct GlaaDiagnostics {
  std::array<IndexSet, 3> init_active;
  std::array<bool, 3> init_fallback{false, false, false};
  std::array<int, 3> iteration_fallbacks{0, 0, 0};
  // Final |s_t - s_{t-1}| of the stopping statistic.
  double stop_delta = 0.0;
};

struct GlaaFit {
  std::array<Matrix, 3> gamma;
  std::array<IndexSet, 3> active;
  Tensor3 delta_hat;
  std::array<Vector, 3> singular_values;
  int iterations = 0;
  bool converged = false;
  // ||delta - delta_hat||_F^2
  double objective = 0.0;
  GlaaDiagnostics diagnostics;
};

// Full estimation: initialize, then iterate until the l2-norm of the
// concatenated singular values changes by less than config.tol between
// consecutive sweeps, or max_iter sweeps have run. delta_hat is the triple
// projection of delta onto the estimated subspaces.
GlaaFit fit(const Tensor3& delta, const GlaaConfig& config);

// As fit(), but starting from a precomputed initialization (used by the
// tuner to share one initialization across many candidate thresholds).
GlaaFit fit_from_init(const Tensor3& delta, const GlaaConfig& config,
                      const FactorState& init);

// delta x1 P1 x2 P2 x3 P3 for P_k the projection onto span(gamma_k);
// gamma_k must have orthonormal columns.
Tensor3 reconstruct(const Tensor3& delta, const std::array<Matrix, 3>& gamma);

// delta x3 (sigma_z + ridge I)^{-1}. sigma_z must be symmetric and the
// ridged matrix positive definite.
Tensor3 gla_tensor(const Tensor3& delta, const Matrix& sigma_z, double ridge);

struct ThresholdPair {
  std::array<double, 3> eta;
  std::array<double, 3> eta_tilde;
};

// Rate-matched threshold scales: eta_k = sqrt(alpha log(p) / n) and
// eta_tilde_k = alpha s_{-k} log(p) / n, with p = p1 p2 p3 and s_{-k} the
// product of the other two sparsity levels.
ThresholdPair theoretical_thresholds(Index n, const Dims& p_dims,
                                     const Dims& s_dims, double alpha);

}  // namespace glaa
