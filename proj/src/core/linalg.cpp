#include "linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace rtucker {

DenseMatrix pseudoinverse(const DenseMatrix& a) {
  if (a.empty()) {
    return DenseMatrix(a.cols(), a.rows());
  }
  const CompactSvd svd = compact_svd(a);
  // V diag(1/sigma) U^T, assembled as sum of rank-1 terms.
  DenseMatrix pinv(a.cols(), a.rows());
  for (std::size_t k = 0; k < svd.rank(); ++k) {
    const double inv_sigma = 1.0 / svd.singular_values[k];
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double vik = svd.vt(k, i) * inv_sigma;
      if (vik == 0.0) continue;
      for (std::size_t j = 0; j < a.rows(); ++j) {
        pinv(i, j) += vik * svd.u(j, k);
      }
    }
  }
  return pinv;
}

std::vector<double> solve_ridge_exact(const DenseMatrix& a, std::span<const double> b,
                                      double lambda) {
  if (b.size() != a.rows()) {
    throw std::invalid_argument("solve_ridge_exact: length(b) != rows(a)");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("solve_ridge_exact: lambda must be non-negative");
  }
  DenseMatrix normal = gram(a);
  for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += lambda;
  const DenseMatrix inv = pseudoinverse(normal);
  const std::vector<double> atb = matvec_transposed(a, b);
  return matvec(inv, atb);
}

std::vector<double> solve_ls_exact(const DenseMatrix& a, std::span<const double> b) {
  return solve_ridge_exact(a, b, 0.0);
}

DenseMatrix augmented_design(const DenseMatrix& a, double lambda) {
  if (lambda < 0.0) {
    throw std::invalid_argument("augmented_design: lambda must be non-negative");
  }
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  DenseMatrix abar(n + d, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) abar(i, j) = a(i, j);
  }
  const double root = std::sqrt(lambda);
  for (std::size_t k = 0; k < d; ++k) abar(n + k, k) = root;
  return abar;
}

std::vector<double> augmented_response(std::span<const double> b, std::size_t d) {
  std::vector<double> bbar(b.begin(), b.end());
  bbar.resize(b.size() + d, 0.0);
  return bbar;
}

double ridge_objective(const DenseMatrix& a, std::span<const double> b,
                       std::span<const double> x, double lambda) {
  const std::vector<double> ax = matvec(a, x);
  double obj = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = ax[i] - b[i];
    obj += r * r;
  }
  obj += lambda * norm2_squared(x);
  return obj;
}

}  // namespace rtucker
