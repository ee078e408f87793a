#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "glaa/estimator.hpp"

namespace glaa {

struct TuningGrid {
  // Per-mode candidate lists for eta_tilde. Empty lists are filled with the
  // data-driven default grid (log-spaced over the initialization's row
  // criterion quantiles, plus 0).
  std::array<std::vector<double>, 3> eta_tilde_candidates;
  double split_fraction = 0.5;
  std::uint64_t seed = 0;
  double init_keep_fraction = 0.5;
  // When non-empty, the initialization keep fraction is searched over these
  // values as well (off by default; the protocol fixes it).
  std::vector<double> init_keep_candidates;
  int grid_size = 8;
  // Number of independent splits whose losses are averaged; 1 is a single
  // split, larger values trade compute for a steadier selection.
  int folds = 1;
  // When false, the z mode is left unscreened: its initialization threshold
  // is 0 and its iteration threshold is not searched.
  bool screen_z = true;

  void validate() const;
};

struct TuningEntry {
  std::array<double, 3> eta_tilde;
  double init_keep = 0.5;
  double loss = 0.0;  // mean over folds
  std::vector<double> fold_losses;
  int iterations = 0;
  bool converged = false;
};

struct TuningResult {
  std::array<double, 3> best_eta_tilde{0.0, 0.0, 0.0};
  double best_loss = 0.0;
  double best_init_keep = 0.5;
  std::vector<TuningEntry> loss_table;
  std::array<double, 3> chosen_init_eta{0.0, 0.0, 0.0};
};

// Disjoint row partition by seeded shuffle; train gets floor(n * fraction)
// rows. Each side keeps its original row order and is re-centered
// independently (centering is part of estimation).
std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction,
                                  std::uint64_t seed);

// eta_k at the (1 - keep_fraction) empirical quantile of the row max-norms
// of unfold_k(delta), so that about keep_fraction * p_k rows survive the
// strict threshold. keep_fraction == 1 keeps every row.
std::array<double, 3> init_eta_from_quantile(const Tensor3& delta,
                                             double keep_fraction);

// || delta_test - delta_test x1 P1 x2 P2 x3 P3 ||_F for projections onto
// the training bases.
double loss(const Tensor3& delta_test,
            const std::array<Matrix, 3>& gamma_train);

// Default candidate grid for one tensor: per mode, `grid_size` log-spaced
// values between the q_lo and q_hi quantiles of the squared row l2-norms of
// unfold_k(delta) * gamma0_(-k), plus 0.
std::array<std::vector<double>, 3> default_eta_tilde_grid(
    const Tensor3& delta, const FactorState& init, int grid_size,
    double q_lo = 0.10, double q_hi = 0.90);

// Full grid search: split, fit each candidate combination on the training
// tensor (sharing one initialization per keep fraction), score on the test
// tensor, return the minimizer. Ties in the loss go to the later candidate
// in ascending enumeration order, preferring sparser models.
TuningResult tune(const Dataset& dataset, const std::array<Index, 3>& ranks,
                  const TuningGrid& grid);

}  // namespace glaa
