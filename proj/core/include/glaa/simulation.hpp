#pragma once

#include <cstdint>
#include <utility>

#include "glaa/estimator.hpp"

namespace glaa {

enum class FKind { sign, sigmoid };

// Generative design for one synthetic experiment, together with everything
// needed to score an estimate against the truth.
//
// The design: z_i ~ N(0, I_{p3}); given z_i, (x_i, y_i) is jointly normal
// with covariance blocks sigma_x, sigma_y and cross block
// G1 f(G3^T z_i) G2^T, where G1 = sigma_x^{1/2} (O^T, 0)^T and
// G2 = sigma_y^{1/2} (O^T, 0)^T for a fixed 5 x 2 semi-orthogonal O, and
// f is a diagonal link with entries f_j(a) = rho_j * sign(a) or
// rho_j * tanh(xi * a).
struct ScenarioSpec {
  Index n = 0;
  Dims p{0, 0, 0};
  Dims s{5, 5, 1};
  std::array<Index, 3> ranks{2, 2, 1};
  FKind f_kind = FKind::sign;
  std::array<double, 2> rho{0.95, 0.85};
  double xi = 1.0;
  double ar_coefficient = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

// Numbered presets:
//   1: n=500, p1=p2=100, p3=1
//   2: n=500, p1=p2=100, p3=20 (s3=5)
//   3: n=160, p1=100, p2=25, p3=1
ScenarioSpec scenario_preset(int which);

struct GroundTruth {
  // Orthonormal bases of the true subspaces, with exact zeros off the
  // active rows.
  std::array<Matrix, 3> gamma;
  std::array<IndexSet, 3> active;
};

// Raw model quantities (pre-orthonormalization), exposed for fixtures:
// gamma1/gamma2 are sigma^{1/2}-distorted and not semi-orthogonal.
struct ModelFactors {
  Matrix gamma1, gamma2, gamma3;
  Matrix sigma_x, sigma_y;
};

// Block-diagonal p x p covariance: AR(coeff) on the leading s x s block
// (entry (i,j) = coeff^{|i-j|}), identity elsewhere.
Matrix sigma_ar_block(Index s, Index p, double coeff);

ModelFactors model_factors(const ScenarioSpec& spec);

GroundTruth build_truth(const ScenarioSpec& spec);

// Diagonal link matrix f(a) in R^{r1 x r2}; a has length r3 and only a[0]
// enters (the designs use r3 = 1). sign(0) is taken as 0.
Matrix f_matrix(const Vector& a, const ScenarioSpec& spec);

// Draws the dataset (uncentered) plus its ground truth; bit-reproducible
// for a fixed spec (including seed). Throws NumericError, naming the
// rho/xi configuration, if any conditional covariance fails the positive-
// definiteness check.
std::pair<Dataset, GroundTruth> generate(const ScenarioSpec& spec);

}  // namespace glaa
