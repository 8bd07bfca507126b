#pragma once

#include <stdexcept>
#include <vector>

#include "dense_matrix.hpp"

namespace rtucker {

// Raised when an iterative factorization fails to converge within its sweep
// cap; signals pathological input rather than a recoverable condition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compact SVD: A = U diag(s) V^T with r = numerical rank, singular values
// strictly positive and non-increasing, U (m x r) and V^T (r x n) with
// orthonormal columns/rows.
struct CompactSvd {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix vt;

  std::size_t rank() const { return singular_values.size(); }
};

// One-sided Jacobi SVD. Sweeps rotate column pairs until every off-diagonal
// Gram entry is at most 1e-14 * ||A||_F^2; caps at 100 sweeps and throws
// NumericalError beyond that. Rank cutoff: sigma_k <= max(m,n) * eps * sigma_max.
CompactSvd compact_svd(const DenseMatrix& a);

// Symmetric eigendecomposition by cyclic two-sided Jacobi. Returns eigenvalues
// sorted non-increasing; eigenvectors (columns) optionally. Independent of the
// one-sided SVD above, so the two can cross-check each other.
struct SymmetricEigen {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

SymmetricEigen symmetric_eigen(const DenseMatrix& m, bool want_vectors = false);

double max_eigenvalue_symmetric(const DenseMatrix& m);

}  // namespace rtucker
