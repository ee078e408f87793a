#include "glaa/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glaa/rng.hpp"

namespace glaa {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - std::floor(pos);
  return (1.0 - w) * v[lo] + w * v[hi];
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (Index i = 0; i < out.rows(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

}  // namespace

void TuningGrid::validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ValueError("TuningGrid: split_fraction must lie in (0, 1)");
  }
  if (!(init_keep_fraction > 0.0 && init_keep_fraction <= 1.0)) {
    throw ValueError("TuningGrid: init_keep_fraction must lie in (0, 1]");
  }
  for (double f : init_keep_candidates) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ValueError("TuningGrid: keep candidates must lie in (0, 1]");
    }
  }
  if (grid_size < 1) throw ValueError("TuningGrid: grid_size must be >= 1");
  if (folds < 1) throw ValueError("TuningGrid: folds must be >= 1");
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction,
                                  std::uint64_t seed) {
  dataset.validate();
  const Index n = dataset.n();
  const auto n_train = static_cast<Index>(
      std::floor(fraction * static_cast<double>(n)));
  const Index n_test = n - n_train;
  if (n_train < 2 || n_test < 2) {
    throw ValueError("split: each side needs at least 2 observations");
  }

  std::vector<Index> perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(
        rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<Index> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<Index> test_rows(perm.begin() + n_train, perm.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  auto take = [&](const std::vector<Index>& rows) {
    Dataset d;
    d.x = select_rows(dataset.x, rows);
    d.y = select_rows(dataset.y, rows);
    d.z = select_rows(dataset.z, rows);
    return center(std::move(d));
  };
  return {take(train_rows), take(test_rows)};
}

std::array<double, 3> init_eta_from_quantile(const Tensor3& delta,
                                             double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ValueError("init_eta_from_quantile: keep_fraction not in (0, 1]");
  }
  std::array<double, 3> eta{};
  for (int k = 1; k <= 3; ++k) {
    Vector norms = matricize(delta, k).cwiseAbs().rowwise().maxCoeff();
    std::vector<double> v(norms.data(), norms.data() + norms.size());
    std::sort(v.begin(), v.end());
    const auto p = static_cast<Index>(v.size());
    const auto kept = static_cast<Index>(std::lround(
        keep_fraction * static_cast<double>(p)));
    const Index cut = p - kept;  // rows strictly above v[cut-1] survive
    if (cut >= 1) {
      eta[k - 1] = v[cut - 1];
    } else {
      // Keep-all: sit just below the smallest row norm.
      eta[k - 1] = v[0] - std::max(std::abs(v[0]), 1.0) * 1e-12;
    }
    eta[k - 1] = std::max(eta[k - 1], 0.0);
  }
  return eta;
}

double loss(const Tensor3& delta_test,
            const std::array<Matrix, 3>& gamma_train) {
  return (delta_test - reconstruct(delta_test, gamma_train)).norm();
}

std::array<std::vector<double>, 3> default_eta_tilde_grid(
    const Tensor3& delta, const FactorState& init, int grid_size, double q_lo,
    double q_hi) {
  std::array<std::vector<double>, 3> grid;
  for (int k = 1; k <= 3; ++k) {
    std::vector<double>& cands = grid[k - 1];
    cands.push_back(0.0);
    // Nothing to threshold when the mode cannot drop below its rank.
    if (delta.dim(k) <= init.gamma[k - 1].cols()) continue;

    Tensor3 w = delta;
    for (int m = 1; m <= 3; ++m) {
      if (m != k) w = mode_product(w, init.gamma[m - 1].transpose(), m);
    }
    Vector sq = matricize(w, k).rowwise().squaredNorm();
    std::vector<double> v(sq.data(), sq.data() + sq.size());
    double hi = quantile(v, q_hi);
    double lo = quantile(v, q_lo);
    if (hi <= 0.0) continue;
    lo = std::max(lo, hi * 1e-12);
    for (int i = 0; i < grid_size; ++i) {
      const double w01 =
          (grid_size == 1) ? 0.0
                           : static_cast<double>(i) /
                                 static_cast<double>(grid_size - 1);
      cands.push_back(std::exp((1.0 - w01) * std::log(lo) +
                               w01 * std::log(hi)));
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  }
  return grid;
}

TuningResult tune(const Dataset& dataset, const std::array<Index, 3>& ranks,
                  const TuningGrid& grid) {
  grid.validate();

  struct Fold {
    Tensor3 delta_train;
    Tensor3 delta_test;
  };
  std::vector<Fold> folds;
  for (int f = 0; f < grid.folds; ++f) {
    auto [train, test] =
        split(dataset, grid.split_fraction, derive_seed(grid.seed, f));
    folds.push_back({sample_delta(train), sample_delta(test)});
  }

  std::vector<double> keeps = grid.init_keep_candidates;
  if (keeps.empty()) keeps.push_back(grid.init_keep_fraction);

  TuningResult result;
  bool have_best = false;
  std::size_t failures = 0;
  std::string first_error;

  for (double keep : keeps) {
    GlaaConfig config;
    config.ranks = ranks;

    std::vector<FactorState> inits;
    std::vector<std::array<double, 3>> etas;
    for (const Fold& fold : folds) {
      auto eta = init_eta_from_quantile(fold.delta_train, keep);
      if (!grid.screen_z) eta[2] = 0.0;
      etas.push_back(eta);
      config.eta = eta;
      inits.push_back(initialize(fold.delta_train, config));
    }

    auto cands = grid.eta_tilde_candidates;
    const auto defaults = default_eta_tilde_grid(folds[0].delta_train,
                                                 inits[0], grid.grid_size);
    for (int k = 0; k < 3; ++k) {
      if (cands[k].empty()) cands[k] = defaults[k];
      std::sort(cands[k].begin(), cands[k].end());
    }
    if (!grid.screen_z) cands[2] = {0.0};

    for (double c1 : cands[0]) {
      for (double c2 : cands[1]) {
        for (double c3 : cands[2]) {
          config.eta_tilde = {c1, c2, c3};
          TuningEntry entry;
          entry.eta_tilde = config.eta_tilde;
          entry.init_keep = keep;
          entry.converged = true;
          bool failed = false;
          for (std::size_t f = 0; f < folds.size(); ++f) {
            config.eta = etas[f];
            try {
              const GlaaFit fitted =
                  fit_from_init(folds[f].delta_train, config, inits[f]);
              entry.fold_losses.push_back(
                  loss(folds[f].delta_test, fitted.gamma));
              entry.iterations = std::max(entry.iterations, fitted.iterations);
              entry.converged = entry.converged && fitted.converged;
            } catch (const Error& e) {
              ++failures;
              if (first_error.empty()) first_error = e.what();
              failed = true;
              break;
            }
          }
          if (failed) continue;
          double loss_sum = 0.0;
          for (double l : entry.fold_losses) loss_sum += l;
          entry.loss = loss_sum / static_cast<double>(folds.size());
          result.loss_table.push_back(entry);
          // <= implements the tie-break toward the later (larger,
          // sparser) candidate.
          if (!have_best || entry.loss <= result.best_loss) {
            have_best = true;
            result.best_loss = entry.loss;
            result.best_eta_tilde = entry.eta_tilde;
            result.best_init_keep = keep;
            result.chosen_init_eta = etas[0];
          }
        }
      }
    }
  }

  if (!have_best) {
    throw NumericError("tune: all " + std::to_string(failures) +
                       " candidate fits failed; first error: " + first_error);
  }
  return result;
}

}  // namespace glaa
