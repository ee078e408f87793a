#include "glaa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "glaa/rng.hpp"
#include "glaa/ula.hpp"

namespace glaa {

std::vector<int> scored_modes(const ScenarioSpec&) { return {1, 2}; }

std::vector<RepResult> run_replications(const ScenarioSpec& spec, int reps,
                                        std::uint64_t base_seed,
                                        const HarnessOptions& options) {
  if (reps < 1) throw ValueError("run_replications: reps must be >= 1");
  spec.validate();
  const std::vector<int> modes = scored_modes(spec);

  std::vector<RepResult> results;
  results.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    ScenarioSpec rep_spec = spec;
    rep_spec.seed = derive_seed(base_seed, static_cast<std::uint64_t>(r));
    auto [dataset, truth] = generate(rep_spec);

    RepResult out;
    out.rep = r;

    // Full-data tensor and initialization; also anchors the candidate grid
    // so the tuned thresholds apply to the refit on the same scale.
    const Dataset centered = center(dataset);
    const Tensor3 delta = sample_delta(centered);
    GlaaConfig config;
    config.ranks = spec.ranks;
    config.max_iter = options.max_iter;
    config.tol = options.tol;
    config.eta = init_eta_from_quantile(delta, options.init_keep);
    const FactorState init = initialize(delta, config);
    const auto candidates = default_eta_tilde_grid(
        delta, init, options.grid_size, options.grid_q_lo, options.grid_q_hi);

    TuningGrid grid;
    grid.split_fraction = options.split_fraction;
    grid.folds = options.folds;
    grid.init_keep_fraction = options.init_keep;
    grid.grid_size = options.grid_size;
    grid.seed = splitmix64(rep_spec.seed ^ 0xA5A5A5A5A5A5A5A5ULL);

    // Stage 1: search the x and y thresholds with the z threshold at 0.
    grid.eta_tilde_candidates[0] = candidates[0];
    grid.eta_tilde_candidates[1] = candidates[1];
    grid.eta_tilde_candidates[2] = {0.0};
    TuningResult tuned = tune(dataset, spec.ranks, grid);
    out.tuning_loss = tuned.best_loss;
    out.eta_tilde = tuned.best_eta_tilde;
    // Stage 2: with those fixed, search the z threshold when z is
    // multivariate. Candidates are the midpoints between consecutive
    // order statistics of the full-data z criteria at the stage-1 bases,
    // so every distinct support size is reachable. The conditional loss
    // curve is flat across the noise rows, so among candidates whose fold
    // losses sit within one paired standard error of the minimizer, the
    // largest (sparsest) wins.
    if (spec.p[2] > spec.ranks[2]) {
      config.eta_tilde = {tuned.best_eta_tilde[0], tuned.best_eta_tilde[1],
                          0.0};
      const GlaaFit aux = fit_from_init(delta, config, init);
      Tensor3 w = mode_product(delta, aux.gamma[0].transpose(), 1);
      w = mode_product(w, aux.gamma[1].transpose(), 2);
      const Vector crit = matricize(w, 3).rowwise().squaredNorm();
      std::vector<double> sorted_crit(crit.data(), crit.data() + crit.size());
      std::sort(sorted_crit.begin(), sorted_crit.end(),
                std::greater<double>());
      std::vector<double> z_cands{0.0};
      for (Index m = spec.ranks[2]; m < spec.p[2]; ++m) {
        z_cands.push_back(0.5 * (sorted_crit[m - 1] + sorted_crit[m]));
      }
      std::sort(z_cands.begin(), z_cands.end());
      z_cands.erase(std::unique(z_cands.begin(), z_cands.end()),
                    z_cands.end());

      grid.eta_tilde_candidates[0] = {tuned.best_eta_tilde[0]};
      grid.eta_tilde_candidates[1] = {tuned.best_eta_tilde[1]};
      grid.eta_tilde_candidates[2] = z_cands;
      tuned = tune(dataset, spec.ranks, grid);

      const TuningEntry* argmin = nullptr;
      for (const TuningEntry& e : tuned.loss_table) {
        if (argmin == nullptr || e.loss <= argmin->loss) argmin = &e;
      }
      const TuningEntry* chosen = argmin;
      for (const TuningEntry& e : tuned.loss_table) {
        if (e.eta_tilde[2] <= chosen->eta_tilde[2]) continue;
        const std::size_t f = e.fold_losses.size();
        if (f != argmin->fold_losses.size() || f == 0) continue;
        double mean = 0.0;
        for (std::size_t i = 0; i < f; ++i) {
          mean += e.fold_losses[i] - argmin->fold_losses[i];
        }
        mean /= static_cast<double>(f);
        double var = 0.0;
        for (std::size_t i = 0; i < f; ++i) {
          const double d = e.fold_losses[i] - argmin->fold_losses[i] - mean;
          var += d * d;
        }
        const double se =
            f > 1 ? std::sqrt(var / static_cast<double>(f - 1) /
                              static_cast<double>(f))
                  : 0.0;
        if (mean <= se) chosen = &e;
      }
      out.tuning_loss = chosen->loss;
      out.eta_tilde = chosen->eta_tilde;
    }

    config.eta_tilde = out.eta_tilde;
    const GlaaFit f = fit_from_init(delta, config, init);

    out.eta = config.eta;
    out.iterations = f.iterations;
    out.converged = f.converged;
    out.objective = f.objective;
    out.delta_sq = delta.squared_norm();
    out.delta_hat_sq = f.delta_hat.squared_norm();
    out.glaa = evaluate({f.gamma, f.active}, truth, modes);

    const UlaEstimate ula = ula_estimate(ula_tensor(dataset), spec.ranks);
    SubspaceEstimate ula_sub;
    ula_sub.gamma = ula.gamma;
    for (int k = 0; k < 3; ++k) {
      IndexSet top(ula.ranked_rows[k].begin(),
                   ula.ranked_rows[k].begin() + spec.s[k]);
      std::sort(top.begin(), top.end());
      ula_sub.active[k] = std::move(top);
    }
    out.ula = evaluate(ula_sub, truth, modes);

    results.push_back(std::move(out));
  }
  return results;
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) throw ValueError("aggregate: no values");
  Aggregate a;
  for (double v : values) a.mean += v;
  a.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    a.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return a;
}

}  // namespace glaa
