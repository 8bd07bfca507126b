#include "missing.hpp"

#include <algorithm>
#include <stdexcept>

#include "linalg.hpp"

namespace rtucker {

RowRemovalContext::RowRemovalContext(const DenseMatrix& original,
                                     std::vector<std::size_t> removed, double lambda)
    : original_(original), removed_(std::move(removed)), lambda_(lambda) {
  if (lambda_ <= 0.0) {
    throw std::invalid_argument(
        "RowRemovalContext: lambda must be positive (recompute directly at 0)");
  }
  std::sort(removed_.begin(), removed_.end());
  for (std::size_t k = 0; k < removed_.size(); ++k) {
    if (removed_[k] >= original_.rows() ||
        (k > 0 && removed_[k] == removed_[k - 1])) {
      throw std::invalid_argument("RowRemovalContext: bad removed-row set");
    }
  }
  std::vector<bool> is_removed(original_.rows(), false);
  for (std::size_t r : removed_) is_removed[r] = true;
  for (std::size_t i = 0; i < original_.rows(); ++i) {
    if (!is_removed[i]) kept_.push_back(i);
  }

  svd_ = compact_svd(original_);
  original_scores_ = ridge_scores(svd_, original_.rows(), lambda_);

  removed_cross_ = DenseMatrix(removed_.size(), removed_.size());
  for (std::size_t a = 0; a < removed_.size(); ++a) {
    const std::vector<double> row =
        cross_score_row(svd_, original_.rows(), removed_[a], lambda_);
    for (std::size_t b = 0; b < removed_.size(); ++b) {
      removed_cross_(a, b) = row[removed_[b]];
    }
  }
}

std::vector<double> RowRemovalContext::cross_slice(std::size_t i) const {
  const std::vector<double> row = cross_score_row(svd_, original_.rows(), i, lambda_);
  std::vector<double> slice(removed_.size());
  for (std::size_t b = 0; b < removed_.size(); ++b) slice[b] = row[removed_[b]];
  return slice;
}

ScoreVector RowRemovalContext::exact_scores_after_removal() const {
  ScoreVector out;
  out.lambda = lambda_;
  out.scores.resize(kept_.size());

  if (removed_.empty()) {
    for (std::size_t k = 0; k < kept_.size(); ++k) {
      out.scores[k] = original_scores_.scores[kept_[k]];
    }
    return out;
  }

  // (I - L_SS) is positive definite: every eigenvalue of L is below 1 when
  // lambda > 0 and interlacing preserves that for the principal submatrix.
  DenseMatrix correction = removed_cross_;
  for (std::size_t a = 0; a < correction.rows(); ++a) {
    for (std::size_t b = 0; b < correction.cols(); ++b) {
      correction(a, b) = (a == b ? 1.0 : 0.0) - correction(a, b);
    }
  }
  const DenseMatrix inv = pseudoinverse(correction);

  for (std::size_t k = 0; k < kept_.size(); ++k) {
    const std::vector<double> v = cross_slice(kept_[k]);
    const std::vector<double> iv = matvec(inv, v);
    out.scores[k] = original_scores_.scores[kept_[k]] + dot(v, iv);
  }
  return out;
}

ScoreVector RowRemovalContext::score_upper_bound_after_removal() const {
  ScoreVector out;
  out.lambda = lambda_;
  out.scores.resize(kept_.size());

  double coeff = 0.0;
  if (!removed_.empty()) {
    const double lmax = max_eigenvalue_symmetric(removed_cross_);
    coeff = 1.0 / (1.0 - lmax);
  }

  for (std::size_t k = 0; k < kept_.size(); ++k) {
    double sum_sq = 0.0;
    if (!removed_.empty()) {
      const std::vector<double> v = cross_slice(kept_[k]);
      sum_sq = norm2_squared(v);
    }
    out.scores[k] = original_scores_.scores[kept_[k]] + coeff * sum_sq;
  }
  return out;
}

double sum_squared_cross_bound(const DenseMatrix& a, double lambda, std::size_t i) {
  if (i >= a.rows()) {
    throw std::invalid_argument("sum_squared_cross_bound: row out of range");
  }
  bool zero_row = true;
  for (double v : a.row(i)) {
    if (v != 0.0) {
      zero_row = false;
      break;
    }
  }
  if (zero_row) return 0.0;
  const CompactSvd svd = compact_svd(a);
  const std::vector<double> row = cross_score_row(svd, a.rows(), i, lambda);
  return norm2_squared(row);
}

double kronecker_removal_coefficient(const ImplicitKronecker& k, double lambda) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("kronecker_removal_coefficient: lambda must be positive");
  }
  double product = 1.0;
  for (std::size_t n = 0; n < k.factor_count(); ++n) {
    const double smax = k.factor_svd(n).singular_values.empty()
                            ? 0.0
                            : k.factor_svd(n).singular_values.front();
    product *= smax * smax;
  }
  return 1.0 + product / lambda;
}

}  // namespace rtucker
