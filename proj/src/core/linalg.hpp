#pragma once

#include <span>
#include <vector>

#include "dense_matrix.hpp"
#include "svd.hpp"

namespace rtucker {

// Moore-Penrose inverse via compact SVD: V diag(1/sigma) U^T.
DenseMatrix pseudoinverse(const DenseMatrix& a);

// argmin_x ||A x - b||^2 + lambda ||x||^2, computed through the normal
// equations as (A^T A + lambda I)^+ A^T b. Exact reference route used as the
// oracle for every approximation in this library. For lambda = 0 and a
// rank-deficient A this yields the minimum-norm least-squares solution.
std::vector<double> solve_ridge_exact(const DenseMatrix& a, std::span<const double> b,
                                      double lambda);

std::vector<double> solve_ls_exact(const DenseMatrix& a, std::span<const double> b);

// [A ; sqrt(lambda) I_d] and [b ; 0]: the augmented system that rewrites ridge
// regression as ordinary least squares.
DenseMatrix augmented_design(const DenseMatrix& a, double lambda);
std::vector<double> augmented_response(std::span<const double> b, std::size_t d);

double ridge_objective(const DenseMatrix& a, std::span<const double> b,
                       std::span<const double> x, double lambda);

}  // namespace rtucker
