#pragma once

#include <cstddef>
#include <vector>

#include "dense_matrix.hpp"
#include "kronecker.hpp"
#include "leverage.hpp"
#include "svd.hpp"

namespace rtucker {

// Ridge leverage scores of a design matrix after a set of rows is removed,
// derived from the original cross scores without refactoring the reduced
// matrix. Requires lambda > 0: the inverse-based update formulas do not apply
// at lambda = 0 (recompute from scratch there instead). Only the removed-set
// principal submatrix and per-row cross slices are formed, never the full
// n x n cross-score matrix.
class RowRemovalContext {
 public:
  RowRemovalContext(const DenseMatrix& original, std::vector<std::size_t> removed,
                    double lambda);

  const std::vector<std::size_t>& kept() const { return kept_; }
  const std::vector<std::size_t>& removed() const { return removed_; }
  double lambda() const { return lambda_; }

  // Exact updated scores for the kept rows via the Woodbury identity:
  //   l_i(A~) = l_i(A) + v_i^T (I - L_SS)^{-1} v_i,
  // with v_i the cross scores between row i and the removed rows.
  ScoreVector exact_scores_after_removal() const;

  // Per-row upper bound l_i(A) + sum_j v_ij^2 / (1 - lambda_max(L_SS)).
  ScoreVector score_upper_bound_after_removal() const;

 private:
  DenseMatrix original_;
  CompactSvd svd_;
  std::vector<std::size_t> kept_;
  std::vector<std::size_t> removed_;
  double lambda_ = 0.0;
  ScoreVector original_scores_;
  DenseMatrix removed_cross_;  // |removed| x |removed| principal submatrix

  std::vector<double> cross_slice(std::size_t i) const;  // (l_ij)_{j in removed}
};

// sum_j l_ij^2 for one row; at most l_i, with equality iff lambda = 0.
double sum_squared_cross_bound(const DenseMatrix& a, double lambda, std::size_t i);

// Removal-set-independent bound 1 + prod_n sigma_max^2(A^(n)) / lambda on
// 1 / (1 - lambda_max(L_SS)) for a Kronecker design.
double kronecker_removal_coefficient(const ImplicitKronecker& k, double lambda);

}  // namespace rtucker
