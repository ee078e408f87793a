#include "glaa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "glaa/linalg.hpp"

namespace glaa {

namespace {

// Cyclic companions of each mode: mode k pairs with (first, second) and the
// mode-k unfolding's columns are indexed by (i_first, i_second) with the
// second varying fastest.
constexpr int kFirst[3] = {2, 3, 1};
constexpr int kSecond[3] = {3, 1, 2};

// Active set by strict threshold on a per-row criterion; if fewer than
// min_size rows pass, keeps the min_size largest-criterion rows instead
// (ties to the smaller index) and reports the fallback.
IndexSet threshold_rows(const Vector& criterion, double threshold,
                        Index min_size, bool* fell_back) {
  IndexSet active;
  for (Index j = 0; j < criterion.size(); ++j) {
    if (criterion[j] > threshold) active.push_back(j);
  }
  *fell_back = false;
  if (static_cast<Index>(active.size()) < min_size) {
    *fell_back = true;
    IndexSet order(criterion.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return criterion[a] > criterion[b];
    });
    active.assign(order.begin(), order.begin() + min_size);
    std::sort(active.begin(), active.end());
  }
  return active;
}

// SVD of the row-masked matrix, realized as the SVD of the active-row
// submatrix scattered back into p rows: identical spectrum, and the
// inactive rows of the basis come out exactly zero.
std::pair<Matrix, Vector> masked_left_svd(const Matrix& m,
                                          const IndexSet& active_rows,
                                          Index r) {
  Matrix sub(active_rows.size(), m.cols());
  for (Index i = 0; i < static_cast<Index>(active_rows.size()); ++i) {
    sub.row(i) = m.row(active_rows[i]);
  }
  auto [u, s] = top_left_singular_with_values(sub, r);
  Matrix full = Matrix::Zero(m.rows(), r);
  for (Index i = 0; i < static_cast<Index>(active_rows.size()); ++i) {
    full.row(active_rows[i]) = u.row(i);
  }
  return {std::move(full), std::move(s)};
}

// unfold_k(delta) * gamma_(-k) as a p_k x (r_a * r_b) matrix, computed by
// contracting the two companion modes (cheap side first).
Matrix projected_unfolding(const Tensor3& delta,
                           const std::array<Matrix, 3>& gamma, int mode) {
  const int a = kFirst[mode - 1];
  const int b = kSecond[mode - 1];
  const Matrix& ga = gamma[a - 1];
  const Matrix& gb = gamma[b - 1];
  Tensor3 w = (ga.cols() <= gb.cols())
                  ? mode_product(mode_product(delta, ga.transpose(), a),
                                 gb.transpose(), b)
                  : mode_product(mode_product(delta, gb.transpose(), b),
                                 ga.transpose(), a);
  return matricize(w, mode);
}

void check_orthonormal(const std::array<Matrix, 3>& gamma, const Dims& dims,
                       const char* who) {
  for (int k = 0; k < 3; ++k) {
    if (gamma[k].rows() != dims[k]) {
      throw DimensionError(std::string(who) + ": gamma rows mismatch");
    }
    const Matrix gram = gamma[k].transpose() * gamma[k];
    const Matrix eye = Matrix::Identity(gamma[k].cols(), gamma[k].cols());
    if ((gram - eye).cwiseAbs().maxCoeff() > 1e-6) {
      throw ValueError(std::string(who) +
                       ": gamma columns are not orthonormal");
    }
  }
}

}  // namespace

void Dataset::validate() const {
  if (y.rows() != x.rows() || z.rows() != x.rows()) {
    throw DimensionError("Dataset: x, y, z must have equal row counts");
  }
  if (x.cols() < 1 || y.cols() < 1 || z.cols() < 1) {
    throw DimensionError("Dataset: each block needs at least one column");
  }
}

Dataset center(Dataset d) {
  d.validate();
  if (d.n() < 2) throw ValueError("center: need at least 2 observations");
  for (Matrix* m : {&d.x, &d.y, &d.z}) {
    m->rowwise() -= m->colwise().mean();
  }
  d.centered = true;
  return d;
}

Tensor3 sample_delta(const Dataset& dataset) {
  dataset.validate();
  if (!dataset.centered) {
    throw ValueError("sample_delta: dataset must be centered first");
  }
  const Index n = dataset.n();
  const Dims p = dataset.p();
  Tensor3 delta(p);
  // Slice i1 of delta is ((y .* x_col)^T z) / n, a contiguous p2 x p3
  // row-major block of the tensor.
  Matrix scaled(n, p[1]);
  for (Index i1 = 0; i1 < p[0]; ++i1) {
    scaled = dataset.y.array().colwise() * dataset.x.col(i1).array();
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(
        delta.values().data() + i1 * p[1] * p[2], p[1], p[2]) =
        (scaled.transpose() * dataset.z) / static_cast<double>(n);
  }
  return delta;
}

void GlaaConfig::validate(const Dims& dims) const {
  for (int k = 0; k < 3; ++k) {
    if (ranks[k] < 1 || ranks[k] > dims[k]) {
      throw DimensionError("GlaaConfig: rank out of range for mode " +
                           std::to_string(k + 1));
    }
    const Index other = ranks[kFirst[k] - 1] * ranks[kSecond[k] - 1];
    if (ranks[k] > other) {
      throw ValueError(
          "GlaaConfig: rank " + std::to_string(k + 1) +
          " exceeds the product of the other two ranks (invalid core)");
    }
    if (eta[k] < 0.0 || eta_tilde[k] < 0.0) {
      throw ValueError("GlaaConfig: thresholds must be nonnegative");
    }
  }
  if (max_iter < 1) throw ValueError("GlaaConfig: max_iter must be >= 1");
  if (!(tol > 0.0)) throw ValueError("GlaaConfig: tol must be positive");
}

double FactorState::singular_value_norm() const {
  double sq = 0.0;
  for (const auto& s : singular_values) sq += s.squaredNorm();
  return std::sqrt(sq);
}

FactorState initialize(const Tensor3& delta, const GlaaConfig& config) {
  config.validate(delta.dims());
  const Dims& d = delta.dims();

  // Row max-norms of all three unfoldings in one pass.
  std::array<Vector, 3> maxnorm;
  for (int k = 0; k < 3; ++k) maxnorm[k] = Vector::Zero(d[k]);
  const double* data = delta.values().data();
  Index off = 0;
  for (Index i1 = 0; i1 < d[0]; ++i1) {
    for (Index i2 = 0; i2 < d[1]; ++i2) {
      for (Index i3 = 0; i3 < d[2]; ++i3) {
        const double v = std::abs(data[off++]);
        if (v > maxnorm[0][i1]) maxnorm[0][i1] = v;
        if (v > maxnorm[1][i2]) maxnorm[1][i2] = v;
        if (v > maxnorm[2][i3]) maxnorm[2][i3] = v;
      }
    }
  }

  FactorState state;
  for (int k = 0; k < 3; ++k) {
    state.active[k] = threshold_rows(maxnorm[k], config.eta[k],
                                     config.ranks[k], &state.fallback[k]);
  }

  std::array<std::vector<char>, 3> in_active;
  for (int k = 0; k < 3; ++k) {
    in_active[k].assign(d[k], 0);
    for (Index j : state.active[k]) in_active[k][j] = 1;
  }

  for (int k = 1; k <= 3; ++k) {
    const int a = kFirst[k - 1];
    const int b = kSecond[k - 1];
    Matrix m = matricize(delta, k);
    // Column mask D_{active_a} (x) D_{active_b}: column (ja, jb) survives
    // only when both coordinates are active.
    for (Index ja = 0; ja < d[a - 1]; ++ja) {
      for (Index jb = 0; jb < d[b - 1]; ++jb) {
        if (!in_active[a - 1][ja] || !in_active[b - 1][jb]) {
          m.col(ja * d[b - 1] + jb).setZero();
        }
      }
    }
    auto [u, s] = masked_left_svd(m, state.active[k - 1], config.ranks[k - 1]);
    state.gamma[k - 1] = std::move(u);
    state.singular_values[k - 1] = std::move(s);
  }
  return state;
}

FactorState iterate_step(const Tensor3& delta,
                         const std::array<Matrix, 3>& gamma,
                         const GlaaConfig& config) {
  config.validate(delta.dims());
  check_orthonormal(gamma, delta.dims(), "iterate_step");

  FactorState state;
  state.gamma = gamma;
  for (int k = 1; k <= 3; ++k) {
    const Matrix b = projected_unfolding(delta, state.gamma, k);
    const Vector criterion = b.rowwise().squaredNorm();
    state.active[k - 1] =
        threshold_rows(criterion, config.eta_tilde[k - 1],
                       config.ranks[k - 1], &state.fallback[k - 1]);
    auto [u, s] =
        masked_left_svd(b, state.active[k - 1], config.ranks[k - 1]);
    state.gamma[k - 1] = std::move(u);
    state.singular_values[k - 1] = std::move(s);
  }
  return state;
}

GlaaFit fit_from_init(const Tensor3& delta, const GlaaConfig& config,
                      const FactorState& init) {
  config.validate(delta.dims());

  GlaaFit out;
  out.diagnostics.init_active = init.active;
  out.diagnostics.init_fallback = init.fallback;

  FactorState state = init;
  double s_prev = init.singular_value_norm();
  for (int t = 1; t <= config.max_iter; ++t) {
    state = iterate_step(delta, state.gamma, config);
    out.iterations = t;
    for (int k = 0; k < 3; ++k) {
      if (state.fallback[k]) ++out.diagnostics.iteration_fallbacks[k];
    }
    const double s_cur = state.singular_value_norm();
    out.diagnostics.stop_delta = std::abs(s_cur - s_prev);
    if (out.diagnostics.stop_delta < config.tol) {
      out.converged = true;
      break;
    }
    s_prev = s_cur;
  }

  out.gamma = state.gamma;
  out.active = state.active;
  out.singular_values = state.singular_values;
  out.delta_hat = reconstruct(delta, out.gamma);
  out.objective = (delta - out.delta_hat).squared_norm();
  return out;
}

GlaaFit fit(const Tensor3& delta, const GlaaConfig& config) {
  return fit_from_init(delta, config, initialize(delta, config));
}

Tensor3 reconstruct(const Tensor3& delta,
                    const std::array<Matrix, 3>& gamma) {
  check_orthonormal(gamma, delta.dims(), "reconstruct");
  // P_k = gamma_k gamma_k^T, applied as two thin products via the core.
  Tensor3 core = delta;
  for (int k = 1; k <= 3; ++k) {
    core = mode_product(core, gamma[k - 1].transpose(), k);
  }
  Tensor3 out = core;
  for (int k = 1; k <= 3; ++k) {
    out = mode_product(out, gamma[k - 1], k);
  }
  return out;
}

Tensor3 gla_tensor(const Tensor3& delta, const Matrix& sigma_z, double ridge) {
  const Index p3 = delta.dim(3);
  if (sigma_z.rows() != p3 || sigma_z.cols() != p3) {
    throw DimensionError("gla_tensor: sigma_z must be p3 x p3");
  }
  if (ridge < 0.0) throw ValueError("gla_tensor: ridge must be nonnegative");
  const double scale = std::max(1.0, sigma_z.cwiseAbs().maxCoeff());
  if ((sigma_z - sigma_z.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw ValueError("gla_tensor: sigma_z must be symmetric");
  }
  Matrix ridged = sigma_z;
  ridged.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(ridged);
  if (llt.info() != Eigen::Success || min_eigenvalue(ridged) <= 0.0) {
    throw NumericError(
        "gla_tensor: sigma_z + ridge*I is not positive definite");
  }
  return refold(llt.solve(matricize(delta, 3)), 3, delta.dims());
}

ThresholdPair theoretical_thresholds(Index n, const Dims& p_dims,
                                     const Dims& s_dims, double alpha) {
  if (n < 1 || alpha <= 0.0) {
    throw ValueError("theoretical_thresholds: n and alpha must be positive");
  }
  for (int k = 0; k < 3; ++k) {
    if (p_dims[k] < 1 || s_dims[k] < 1) {
      throw ValueError("theoretical_thresholds: dims must be positive");
    }
  }
  const double logp = std::log(static_cast<double>(p_dims[0]) *
                               static_cast<double>(p_dims[1]) *
                               static_cast<double>(p_dims[2]));
  ThresholdPair out;
  for (int k = 0; k < 3; ++k) {
    const double s_minus = static_cast<double>(s_dims[kFirst[k] - 1]) *
                           static_cast<double>(s_dims[kSecond[k] - 1]);
    out.eta[k] = std::sqrt(alpha * logp / static_cast<double>(n));
    out.eta_tilde[k] = alpha * s_minus * logp / static_cast<double>(n);
  }
  return out;
}

}  // namespace glaa
