#include "glaa/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "glaa/linalg.hpp"

namespace glaa {

namespace {

Index intersection_size(const IndexSet& a, const IndexSet& b) {
  Index count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

Matrix ensure_orthonormal(const Matrix& g) {
  const Matrix gram = g.transpose() * g;
  const Matrix eye = Matrix::Identity(g.cols(), g.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() <= 1e-8) return g;
  return orthonormalize(g);
}

}  // namespace

std::pair<double, double> tpr_fpr(const IndexSet& truth,
                                  const IndexSet& estimate, Index p,
                                  Index s) {
  if (s < 1 || p <= s) throw ValueError("tpr_fpr: need 1 <= s < p");
  const Index hits = intersection_size(truth, estimate);
  const Index false_hits = static_cast<Index>(estimate.size()) - hits;
  return {static_cast<double>(hits) / static_cast<double>(s),
          static_cast<double>(false_hits) / static_cast<double>(p - s)};
}

double subspace_distance(const Matrix& gamma_true, const Matrix& gamma_hat,
                         Index r) {
  if (gamma_true.cols() != gamma_hat.cols() || gamma_true.cols() != r) {
    throw DimensionError(
        "subspace_distance: bases must share the column count r");
  }
  if (gamma_true.rows() != gamma_hat.rows()) {
    throw DimensionError("subspace_distance: bases must share the row count");
  }
  const Matrix gt = ensure_orthonormal(gamma_true);
  const Matrix gh = ensure_orthonormal(gamma_hat);
  const double d =
      (gt * gt.transpose() - gh * gh.transpose()).norm() /
      std::sqrt(2.0 * static_cast<double>(r));
  return std::clamp(d, 0.0, 1.0);
}

MetricsReport evaluate(const SubspaceEstimate& estimate,
                       const GroundTruth& truth,
                       const std::vector<int>& modes) {
  if (modes.empty()) throw ValueError("evaluate: modes must be non-empty");
  MetricsReport report;
  for (int k = 0; k < 3; ++k) {
    const Index p = truth.gamma[k].rows();
    const auto s = static_cast<Index>(truth.active[k].size());
    const Index hits = intersection_size(truth.active[k], estimate.active[k]);
    report.tpr[k] = static_cast<double>(hits) / static_cast<double>(s);
    // No inactive variables to falsely select when the mode is saturated.
    report.fpr[k] =
        (p > s) ? static_cast<double>(
                      static_cast<Index>(estimate.active[k].size()) - hits) /
                      static_cast<double>(p - s)
                : 0.0;
    report.d_per_mode[k] = subspace_distance(truth.gamma[k], estimate.gamma[k],
                                             truth.gamma[k].cols());
  }
  double sum = 0.0;
  for (int mode : modes) {
    if (mode < 1 || mode > 3) throw ValueError("evaluate: modes must be 1..3");
    sum += report.d_per_mode[mode - 1];
  }
  report.d_avg = sum / static_cast<double>(modes.size());
  return report;
}

}  // namespace glaa
