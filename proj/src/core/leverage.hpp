#pragma once

#include <cstddef>
#include <vector>

#include "dense_matrix.hpp"
#include "svd.hpp"

namespace rtucker {

// Per-row leverage or ridge-leverage scores together with the regularization
// strength they were computed at. Exact computation keeps every score in
// [0, 1].
struct ScoreVector {
  std::vector<double> scores;
  double lambda = 0.0;

  std::size_t size() const { return scores.size(); }
  double l1_norm() const;
};

// Symmetric matrix of cross lambda-ridge leverage scores
// L = A (A^T A + lambda I)^+ A^T; all eigenvalues lie in [0, 1), strictly
// below 1 when lambda > 0.
struct CrossScoreMatrix {
  DenseMatrix l;
  double lambda = 0.0;
};

// Ridge leverage scores through the SVD form
//   l_i = sum_k sigma_k^2 / (sigma_k^2 + lambda) * u_ik^2,
// which is the default route (one SVD, then O(n r) evaluation).
ScoreVector ridge_scores(const DenseMatrix& a, double lambda);
ScoreVector ridge_scores(const CompactSvd& svd, std::size_t n, double lambda);

// Pseudoinverse form a_i (A^T A + lambda I)^+ a_i^T, retained as an
// independent cross-check route for the SVD form above.
ScoreVector ridge_scores_pinv_form(const DenseMatrix& a, double lambda);

ScoreVector classical_scores(const DenseMatrix& a);

// Full n x n cross-score matrix; refuses n above the cap to avoid an
// accidental O(n^2) blowup.
CrossScoreMatrix cross_scores(const DenseMatrix& a, double lambda,
                              std::size_t row_cap = 10000);

// Row i of the cross-score matrix, evaluated from a cached SVD without
// forming the full matrix.
std::vector<double> cross_score_row(const CompactSvd& svd, std::size_t n,
                                    std::size_t i, double lambda);

// d_eff = sum_i l_i^lambda = sum_k sigma_k^2 / (sigma_k^2 + lambda).
double effective_dimension(const ScoreVector& scores);

// Largest beta such that candidate_i / ||candidate||_1 >= beta * exact_i / ||exact||_1
// for every row; rows with exact score 0 are skipped. Returns +infinity when
// no row is comparable.
double check_beta_overestimate(const ScoreVector& candidate, const ScoreVector& exact);

}  // namespace rtucker
