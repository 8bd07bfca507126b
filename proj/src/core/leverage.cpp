#include "leverage.hpp"

#include <limits>
#include <stdexcept>

#include "linalg.hpp"

namespace rtucker {

double ScoreVector::l1_norm() const {
  double s = 0.0;
  for (double v : scores) s += v;
  return s;
}

ScoreVector ridge_scores(const CompactSvd& svd, std::size_t n, double lambda) {
  if (lambda < 0.0) {
    throw std::invalid_argument("ridge_scores: lambda must be non-negative");
  }
  std::vector<double> weights(svd.rank());
  for (std::size_t k = 0; k < svd.rank(); ++k) {
    const double s2 = svd.singular_values[k] * svd.singular_values[k];
    weights[k] = s2 / (s2 + lambda);
  }
  ScoreVector out;
  out.lambda = lambda;
  out.scores.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < svd.rank(); ++k) {
      const double u = svd.u(i, k);
      s += weights[k] * u * u;
    }
    out.scores[i] = s;
  }
  return out;
}

ScoreVector ridge_scores(const DenseMatrix& a, double lambda) {
  bool all_zero = true;
  for (std::size_t i = 0; i < a.size() && all_zero; ++i) {
    if (a.data()[i] != 0.0) all_zero = false;
  }
  if (all_zero) {
    // Zero rows score zero under both formulas.
    ScoreVector out;
    out.lambda = lambda;
    out.scores.assign(a.rows(), 0.0);
    return out;
  }
  return ridge_scores(compact_svd(a), a.rows(), lambda);
}

ScoreVector ridge_scores_pinv_form(const DenseMatrix& a, double lambda) {
  DenseMatrix normal = gram(a);
  for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += lambda;
  const DenseMatrix inv = pseudoinverse(normal);
  ScoreVector out;
  out.lambda = lambda;
  out.scores.assign(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const std::vector<double> tmp = matvec(inv, a.row(i));
    out.scores[i] = dot(a.row(i), tmp);
  }
  return out;
}

ScoreVector classical_scores(const DenseMatrix& a) { return ridge_scores(a, 0.0); }

CrossScoreMatrix cross_scores(const DenseMatrix& a, double lambda, std::size_t row_cap) {
  if (a.rows() > row_cap) {
    throw std::invalid_argument("cross_scores: row count exceeds cap");
  }
  const CompactSvd svd = compact_svd(a);
  const std::size_t n = a.rows();
  CrossScoreMatrix out;
  out.lambda = lambda;
  out.l = DenseMatrix(n, n);
  for (std::size_t k = 0; k < svd.rank(); ++k) {
    const double s2 = svd.singular_values[k] * svd.singular_values[k];
    const double w = s2 / (s2 + lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const double uik = w * svd.u(i, k);
      if (uik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out.l(i, j) += uik * svd.u(j, k);
      }
    }
  }
  return out;
}

std::vector<double> cross_score_row(const CompactSvd& svd, std::size_t n,
                                    std::size_t i, double lambda) {
  std::vector<double> row(n, 0.0);
  for (std::size_t k = 0; k < svd.rank(); ++k) {
    const double s2 = svd.singular_values[k] * svd.singular_values[k];
    const double w = s2 / (s2 + lambda) * svd.u(i, k);
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] += w * svd.u(j, k);
    }
  }
  return row;
}

double effective_dimension(const ScoreVector& scores) { return scores.l1_norm(); }

double check_beta_overestimate(const ScoreVector& candidate, const ScoreVector& exact) {
  if (candidate.size() != exact.size()) {
    throw std::invalid_argument("check_beta_overestimate: length mismatch");
  }
  const double cand_l1 = candidate.l1_norm();
  const double exact_l1 = exact.l1_norm();
  if (cand_l1 <= 0.0 || exact_l1 <= 0.0) {
    throw std::invalid_argument("check_beta_overestimate: scores must have positive mass");
  }
  double beta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (exact.scores[i] <= 0.0) continue;
    const double ratio =
        (candidate.scores[i] / cand_l1) / (exact.scores[i] / exact_l1);
    if (ratio < beta) beta = ratio;
  }
  return beta;
}

}  // namespace rtucker
