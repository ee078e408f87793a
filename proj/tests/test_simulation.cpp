#include "doctest.h"

#include <cmath>

#include "glaa/harness.hpp"
#include "glaa/linalg.hpp"
#include "glaa/simulation.hpp"
#include "test_support.hpp"

using namespace glaa;

TEST_SUITE_BEGIN("simulation");

TEST_CASE("sigma_ar_block values and positive definiteness") {
  const Matrix s = sigma_ar_block(2, 4, 0.3);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == doctest::Approx(0.3));
  CHECK(s(1, 0) == doctest::Approx(0.3));
  CHECK(s(2, 2) == 1.0);
  CHECK(s(0, 2) == 0.0);

  CHECK((sigma_ar_block(0, 3, 0.9) - Matrix::Identity(3, 3)).norm() == 0.0);

  for (double coeff : {0.3, 0.7, -0.5}) {
    CHECK(min_eigenvalue(sigma_ar_block(5, 8, coeff)) > 0.0);
  }
}

TEST_CASE("build_truth matches the fixed design") {
  ScenarioSpec spec = scenario_preset(1);
  const GroundTruth t1 = build_truth(spec);
  CHECK(t1.gamma[2].rows() == 1);
  CHECK(t1.gamma[2](0, 0) == 1.0);
  CHECK(t1.active[0] == IndexSet{0, 1, 2, 3, 4});
  CHECK(t1.active[2] == IndexSet{0});

  ScenarioSpec s2 = scenario_preset(2);
  const GroundTruth t2 = build_truth(s2);
  CHECK(t2.gamma[2].rows() == 20);
  for (Index j = 0; j < 5; ++j) {
    CHECK(t2.gamma[2](j, 0) == doctest::Approx(1.0 / std::sqrt(5.0)));
  }
  for (Index j = 5; j < 20; ++j) CHECK(t2.gamma[2](j, 0) == 0.0);
  CHECK(t2.active[2].size() == 5);

  for (int k = 0; k < 2; ++k) {
    const Matrix gram = t1.gamma[k].transpose() * t1.gamma[k];
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    // rows off the active block are exact zeros
    CHECK(t1.gamma[k].bottomRows(t1.gamma[k].rows() - 5).cwiseAbs().sum() ==
          0.0);
  }
}

TEST_CASE("identity-covariance factors reduce to the padded block") {
  ScenarioSpec spec = scenario_preset(3);
  spec.ar_coefficient = 0.0;  // sigma = identity
  const ModelFactors mf = model_factors(spec);
  CHECK(mf.gamma1(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(mf.gamma1(3, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(mf.gamma1(4, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  const Matrix gram = mf.gamma1.transpose() * mf.gamma1;
  CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("f_matrix link values") {
  ScenarioSpec spec = scenario_preset(1);
  Vector a(1);
  a << 1.7;
  Matrix f = f_matrix(a, spec);
  CHECK(f(0, 0) == doctest::Approx(0.95));
  CHECK(f(1, 1) == doctest::Approx(0.85));
  CHECK(f(0, 1) == 0.0);

  a << -0.2;
  f = f_matrix(a, spec);
  CHECK(f(0, 0) == doctest::Approx(-0.95));

  a << 0.0;
  f = f_matrix(a, spec);
  CHECK(f(0, 0) == 0.0);  // sign(0) = 0
  CHECK(f(1, 1) == 0.0);

  spec.f_kind = FKind::sigmoid;
  spec.xi = 50.0;
  a << 1.0;
  f = f_matrix(a, spec);
  CHECK(f(0, 0) == doctest::Approx(0.95).epsilon(1e-8));
  a << 0.0;
  CHECK(f_matrix(a, spec)(0, 0) == 0.0);
  a << -1.0;
  CHECK(f_matrix(a, spec)(1, 1) == doctest::Approx(-0.85).epsilon(1e-8));
}

TEST_CASE("generate is bit-reproducible and shape-correct") {
  ScenarioSpec spec = scenario_preset(3);
  spec.n = 40;
  spec.seed = 12345;
  auto [d1, t1] = generate(spec);
  auto [d2, t2] = generate(spec);
  CHECK(d1.x == d2.x);
  CHECK(d1.y == d2.y);
  CHECK(d1.z == d2.z);
  CHECK(!d1.centered);
  CHECK(d1.n() == 40);
  CHECK(d1.p() == Dims{100, 25, 1});

  spec.seed = 54321;
  auto [d3, t3] = generate(spec);
  CHECK(d1.x != d3.x);
}

TEST_CASE("generate rejects a singular design") {
  ScenarioSpec spec = scenario_preset(3);
  spec.n = 10;
  spec.rho = {1.0, 0.85};  // sign link with |f| = 1: conditional covariance
                           // is singular
  CHECK_THROWS_AS(generate(spec), NumericError);
  spec.rho = {1.1, 0.85};
  CHECK_THROWS_AS(spec.validate(), ValueError);
}

TEST_CASE("sigmoid design generates and differs from sign") {
  ScenarioSpec spec = scenario_preset(3);
  spec.n = 30;
  spec.seed = 7;
  spec.f_kind = FKind::sigmoid;
  spec.xi = 2.0;
  auto [d, t] = generate(spec);
  CHECK(d.n() == 30);
  CHECK(std::isfinite(d.x.norm()));
}

TEST_CASE("near-zero association decouples x and y") {
  ScenarioSpec spec = scenario_preset(3);
  spec.p = {8, 6, 1};
  spec.n = 4000;
  spec.seed = 99;
  spec.rho = {1e-9, 1e-9};
  auto [d, truth] = generate(spec);
  const Dataset c = center(d);
  // sample cross-covariance of the projected scores should vanish
  const Matrix u = truth.gamma[0];
  const Matrix v = truth.gamma[1];
  const Matrix cross = (u.transpose() * c.x.transpose() * c.y * v) /
                       static_cast<double>(spec.n);
  CHECK(cross.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(4000.0));
}

TEST_CASE("conditional covariance matches the analytic block (MC)") {
  // At a fixed positive z, Cov(x, y) should be G1 diag(rho) G2^T; checked
  // by Monte Carlo over the generator's own draws conditioned on the sign.
  ScenarioSpec spec = scenario_preset(3);
  spec.p = {8, 6, 1};
  spec.n = 60000;
  spec.seed = 2024;
  auto [d, truth] = generate(spec);
  const ModelFactors mf = model_factors(spec);
  const Matrix expected =
      mf.gamma1 * Vector{{0.95, 0.85}}.asDiagonal() * mf.gamma2.transpose();

  Matrix acc = Matrix::Zero(8, 6);
  Index count = 0;
  for (Index i = 0; i < spec.n; ++i) {
    if (d.z(i, 0) > 0.0) {
      acc += d.x.row(i).transpose() * d.y.row(i);
      ++count;
    }
  }
  acc /= static_cast<double>(count);
  CHECK((acc - expected).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("scored modes cover x and y") {
  CHECK(scored_modes(scenario_preset(1)) == std::vector<int>{1, 2});
  CHECK(scored_modes(scenario_preset(2)) == std::vector<int>{1, 2});
}

TEST_CASE("aggregate mean and standard error") {
  const Aggregate a = aggregate({1.0, 2.0, 3.0, 4.0});
  CHECK(a.mean == doctest::Approx(2.5));
  // sample sd = sqrt(5/3); se = sd / 2
  CHECK(a.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  const Aggregate single = aggregate({7.0});
  CHECK(single.mean == 7.0);
  CHECK(single.se == 0.0);
}

TEST_SUITE_END();
