#include "glaa/ula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glaa/linalg.hpp"
#include "glaa/stats.hpp"

namespace glaa {

Vector normal_score(const Vector& z_col) {
  const Index n = z_col.size();
  if (n < 2) throw ValueError("normal_score: need at least 2 values");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return z_col[a] < z_col[b]; });
  if (z_col[order.front()] == z_col[order.back()]) {
    throw NumericError("normal_score: column is constant");
  }

  // Average 1-based ranks over tie groups.
  Vector scores(n);
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n && z_col[order[j + 1]] == z_col[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    const double s =
        normal_quantile(avg_rank / static_cast<double>(n + 1));
    for (Index k = i; k <= j; ++k) scores[order[k]] = s;
    i = j + 1;
  }
  return scores;
}

Tensor3 ula_tensor(const Dataset& dataset) {
  dataset.validate();
  const Index n = dataset.n();
  if (n < 2) throw ValueError("ula_tensor: need at least 2 observations");

  auto standardize = [n](const Matrix& m, const char* name) {
    Matrix out = m;
    out.rowwise() -= out.colwise().mean();
    for (Index j = 0; j < out.cols(); ++j) {
      const double sd = std::sqrt(out.col(j).squaredNorm() /
                                  static_cast<double>(n - 1));
      if (sd <= 0.0) {
        throw NumericError(std::string("ula_tensor: zero-variance ") + name +
                           " column " + std::to_string(j + 1));
      }
      out.col(j) /= sd;
    }
    return out;
  };

  Dataset t;
  t.x = standardize(dataset.x, "x");
  t.y = standardize(dataset.y, "y");
  t.z.resize(n, dataset.z.cols());
  for (Index j = 0; j < dataset.z.cols(); ++j) {
    t.z.col(j) = normal_score(dataset.z.col(j));
  }
  // Normal scores are rank-symmetric but not exactly mean zero under ties;
  // sample_delta only needs the centered flag for its own contract.
  t.centered = true;
  return sample_delta(t);
}

UlaEstimate ula_estimate(const Tensor3& phi_tilde,
                         const std::array<Index, 3>& ranks) {
  UlaEstimate est;
  est.phi_tilde = phi_tilde;
  for (int k = 1; k <= 3; ++k) {
    const Matrix m = matricize(phi_tilde, k);
    est.gamma[k - 1] = top_left_singular(m, ranks[k - 1]);
    const Vector norms = m.rowwise().norm();
    std::vector<Index>& order = est.ranked_rows[k - 1];
    order.resize(m.rows());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return norms[a] > norms[b]; });
  }
  return est;
}

}  // namespace glaa
