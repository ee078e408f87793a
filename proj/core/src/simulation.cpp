#include "glaa/simulation.hpp"

#include <cmath>

#include "glaa/linalg.hpp"
#include "glaa/rng.hpp"

namespace glaa {

namespace {

constexpr Index kBlockRows = 5;  // rows of the fixed loading block O
constexpr Index kBlockCols = 2;

Matrix loading_block() {
  Matrix o = Matrix::Zero(kBlockRows, kBlockCols);
  o.col(0).setConstant(1.0 / std::sqrt(5.0));
  o(3, 1) = -1.0 / std::sqrt(2.0);
  o(4, 1) = 1.0 / std::sqrt(2.0);
  return o;
}

std::string design_name(const ScenarioSpec& spec) {
  std::string s = (spec.f_kind == FKind::sign) ? "sign" : "sigmoid";
  s += " design, rho=(" + std::to_string(spec.rho[0]) + ", " +
       std::to_string(spec.rho[1]) + ")";
  if (spec.f_kind == FKind::sigmoid) s += ", xi=" + std::to_string(spec.xi);
  return s;
}

// Symmetric PSD square root with the generation-time PD check.
Matrix joint_sqrt_checked(const Matrix& sigma, const ScenarioSpec& spec) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.info() != Eigen::Success) {
    throw NumericError("generate: eigendecomposition of the conditional "
                       "covariance failed (" + design_name(spec) + ")");
  }
  const Vector& w = es.eigenvalues();
  if (w.minCoeff() <= 1e-10) {
    throw NumericError(
        "generate: conditional covariance is not positive definite (" +
        design_name(spec) + ")");
  }
  return es.eigenvectors() * w.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

void ScenarioSpec::validate() const {
  if (n < 2) throw ValueError("ScenarioSpec: n must be at least 2");
  for (int k = 0; k < 3; ++k) {
    if (p[k] < 1) throw ValueError("ScenarioSpec: dimensions must be positive");
    if (s[k] < 1 || s[k] > p[k]) {
      throw ValueError("ScenarioSpec: sparsity must satisfy 1 <= s_k <= p_k");
    }
    if (ranks[k] < 1 || ranks[k] > s[k]) {
      throw ValueError("ScenarioSpec: ranks must satisfy 1 <= r_k <= s_k");
    }
  }
  if (p[0] < kBlockRows || p[1] < kBlockRows) {
    throw ValueError("ScenarioSpec: p1 and p2 must be at least 5");
  }
  if (s[0] != kBlockRows || s[1] != kBlockRows) {
    throw ValueError("ScenarioSpec: the design fixes s1 = s2 = 5");
  }
  if (ranks[0] != kBlockCols || ranks[1] != kBlockCols || ranks[2] != 1) {
    throw ValueError("ScenarioSpec: the design fixes ranks (2, 2, 1)");
  }
  if (p[2] > 1 && (s[2] != kBlockRows || p[2] < kBlockRows)) {
    throw ValueError("ScenarioSpec: multivariate z uses s3 = 5, p3 >= 5");
  }
  if (p[2] == 1 && s[2] != 1) {
    throw ValueError("ScenarioSpec: scalar z requires s3 = 1");
  }
  for (double r : rho) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ValueError("ScenarioSpec: rho must lie in (0, 1]");
    }
  }
  if (f_kind == FKind::sigmoid && !(xi > 0.0)) {
    throw ValueError("ScenarioSpec: xi must be positive");
  }
  if (!(ar_coefficient > -1.0 && ar_coefficient < 1.0)) {
    throw ValueError("ScenarioSpec: ar_coefficient must lie in (-1, 1)");
  }
}

ScenarioSpec scenario_preset(int which) {
  ScenarioSpec spec;
  switch (which) {
    case 1:
      spec.n = 500;
      spec.p = {100, 100, 1};
      spec.s = {5, 5, 1};
      break;
    case 2:
      spec.n = 500;
      spec.p = {100, 100, 20};
      spec.s = {5, 5, 5};
      break;
    case 3:
      spec.n = 160;
      spec.p = {100, 25, 1};
      spec.s = {5, 5, 1};
      break;
    default:
      throw ValueError("scenario_preset: scenario must be 1, 2, or 3");
  }
  return spec;
}

Matrix sigma_ar_block(Index s, Index p, double coeff) {
  if (s < 0 || s > p) throw DimensionError("sigma_ar_block: need 0 <= s <= p");
  Matrix sigma = Matrix::Identity(p, p);
  for (Index i = 0; i < s; ++i) {
    for (Index j = 0; j < s; ++j) {
      sigma(i, j) = std::pow(coeff, std::abs(static_cast<double>(i - j)));
    }
  }
  return sigma;
}

ModelFactors model_factors(const ScenarioSpec& spec) {
  spec.validate();
  ModelFactors mf;
  mf.sigma_x = sigma_ar_block(spec.s[0], spec.p[0], spec.ar_coefficient);
  mf.sigma_y = sigma_ar_block(spec.s[1], spec.p[1], spec.ar_coefficient);

  const Matrix o = loading_block();
  // sigma^{1/2} is block diagonal, so only the leading block acts on O.
  auto lift = [&](const Matrix& sigma, Index p, Index s) {
    Matrix g = Matrix::Zero(p, kBlockCols);
    g.topRows(s) = sym_sqrt(sigma.topLeftCorner(s, s)) * o;
    return g;
  };
  mf.gamma1 = lift(mf.sigma_x, spec.p[0], spec.s[0]);
  mf.gamma2 = lift(mf.sigma_y, spec.p[1], spec.s[1]);

  if (spec.p[2] == 1) {
    mf.gamma3 = Matrix::Ones(1, 1);
  } else {
    mf.gamma3 = Matrix::Zero(spec.p[2], 1);
    mf.gamma3.topRows(kBlockRows).setConstant(1.0 / std::sqrt(5.0));
  }
  return mf;
}

GroundTruth build_truth(const ScenarioSpec& spec) {
  const ModelFactors mf = model_factors(spec);
  GroundTruth truth;
  // Orthonormalize the occupied block only, keeping exact zeros elsewhere.
  auto ortho_sparse = [](const Matrix& g, Index s) {
    Matrix out = Matrix::Zero(g.rows(), g.cols());
    out.topRows(s) = orthonormalize(g.topRows(s));
    return out;
  };
  truth.gamma[0] = ortho_sparse(mf.gamma1, spec.s[0]);
  truth.gamma[1] = ortho_sparse(mf.gamma2, spec.s[1]);
  truth.gamma[2] = mf.gamma3;  // already unit columns
  for (int k = 0; k < 3; ++k) {
    truth.active[k].resize(spec.s[k]);
    for (Index j = 0; j < spec.s[k]; ++j) truth.active[k][j] = j;
  }
  return truth;
}

Matrix f_matrix(const Vector& a, const ScenarioSpec& spec) {
  const Index r1 = spec.ranks[0];
  const Index r2 = spec.ranks[1];
  if (a.size() != spec.ranks[2]) {
    throw DimensionError("f_matrix: a must have length r3");
  }
  Matrix f = Matrix::Zero(r1, r2);
  const double u = a[0];
  for (Index j = 0; j < std::min(r1, r2); ++j) {
    const double mag = spec.rho[std::min<Index>(j, 1)];
    if (spec.f_kind == FKind::sign) {
      f(j, j) = mag * (u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0));
    } else {
      f(j, j) = mag * std::tanh(spec.xi * u);
    }
  }
  return f;
}

std::pair<Dataset, GroundTruth> generate(const ScenarioSpec& spec) {
  spec.validate();
  const ModelFactors mf = model_factors(spec);
  const Index p1 = spec.p[0], p2 = spec.p[1], p3 = spec.p[2];

  auto joint_sigma = [&](const Matrix& f) {
    Matrix sigma(p1 + p2, p1 + p2);
    const Matrix cross = mf.gamma1 * f * mf.gamma2.transpose();
    sigma.topLeftCorner(p1, p1) = mf.sigma_x;
    sigma.bottomRightCorner(p2, p2) = mf.sigma_y;
    sigma.topRightCorner(p1, p2) = cross;
    sigma.bottomLeftCorner(p2, p1) = cross.transpose();
    return sigma;
  };

  // The sign link takes only two values off a null set, so the two
  // factorizations are computed once.
  Matrix sqrt_pos, sqrt_neg;
  if (spec.f_kind == FKind::sign) {
    Vector a_pos = Vector::Ones(1), a_neg = -Vector::Ones(1);
    sqrt_pos = joint_sqrt_checked(joint_sigma(f_matrix(a_pos, spec)), spec);
    sqrt_neg = joint_sqrt_checked(joint_sigma(f_matrix(a_neg, spec)), spec);
  }

  Rng rng(spec.seed);
  Dataset data;
  data.x.resize(spec.n, p1);
  data.y.resize(spec.n, p2);
  data.z.resize(spec.n, p3);
  data.centered = false;

  Vector g(p1 + p2), xy(p1 + p2), z_i(p3);
  for (Index i = 0; i < spec.n; ++i) {
    for (Index j = 0; j < p3; ++j) z_i[j] = rng.normal();
    data.z.row(i) = z_i;
    const Vector a = mf.gamma3.transpose() * z_i;
    for (Index j = 0; j < p1 + p2; ++j) g[j] = rng.normal();
    if (spec.f_kind == FKind::sign) {
      if (a[0] > 0.0) {
        xy = sqrt_pos * g;
      } else if (a[0] < 0.0) {
        xy = sqrt_neg * g;
      } else {
        // sign(0) = 0: x and y are conditionally independent here.
        xy.head(p1) = sym_sqrt(mf.sigma_x) * g.head(p1);
        xy.tail(p2) = sym_sqrt(mf.sigma_y) * g.tail(p2);
      }
    } else {
      const Matrix sqrt_i =
          joint_sqrt_checked(joint_sigma(f_matrix(a, spec)), spec);
      xy = sqrt_i * g;
    }
    data.x.row(i) = xy.head(p1);
    data.y.row(i) = xy.tail(p2);
  }
  return {std::move(data), build_truth(spec)};
}

}  // namespace glaa
