#pragma once

// Brute-force oracles for the test suites. Everything here is deliberately
// naive (explicit loops, Gauss-Jordan inverses, elementwise formulas) and
// shares no code path with the routines under test.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dense_matrix.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace oracles {

inline rtucker::DenseMatrix random_matrix(rtucker::SplitMix64& rng, std::size_t rows,
                                          std::size_t cols, double scale = 1.0) {
  rtucker::DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data()[i] = scale * (2.0 * rng.next_double() - 1.0);
  }
  return m;
}

inline std::vector<double> random_vector(rtucker::SplitMix64& rng, std::size_t n,
                                         double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * (2.0 * rng.next_double() - 1.0);
  return v;
}

inline rtucker::DenseTensor random_tensor(rtucker::SplitMix64& rng,
                                          std::vector<std::size_t> shape) {
  rtucker::DenseTensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 2.0 * rng.next_double() - 1.0;
  return t;
}

// Gauss-Jordan inverse with partial pivoting; throws on singular input.
inline rtucker::DenseMatrix gauss_jordan_inverse(const rtucker::DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("gauss_jordan_inverse: not square");
  rtucker::DenseMatrix work = a;
  rtucker::DenseMatrix inv = rtucker::DenseMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    }
    if (std::abs(work(pivot, col)) < 1e-300) {
      throw std::runtime_error("gauss_jordan_inverse: singular");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(col, j), work(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const double d = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// argmin ||Ax - b||^2 + lambda ||x||^2 by explicit dense inverse of the
// regularized normal matrix (requires it nonsingular).
inline std::vector<double> ridge_solve_dense_inverse(const rtucker::DenseMatrix& a,
                                                     std::span<const double> b,
                                                     double lambda) {
  rtucker::DenseMatrix normal(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      normal(i, j) = s + (i == j ? lambda : 0.0);
    }
  }
  const rtucker::DenseMatrix inv = gauss_jordan_inverse(normal);
  std::vector<double> atb(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t k = 0; k < a.rows(); ++k) atb[i] += a(k, i) * b[k];
  }
  std::vector<double> x(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) x[i] += inv(i, j) * atb[j];
  }
  return x;
}

// Cross-score matrix A (A^T A + lambda I)^{-1} A^T by dense inverse.
inline rtucker::DenseMatrix cross_scores_dense_inverse(const rtucker::DenseMatrix& a,
                                                       double lambda) {
  rtucker::DenseMatrix normal(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      normal(i, j) = s + (i == j ? lambda : 0.0);
    }
  }
  const rtucker::DenseMatrix inv = gauss_jordan_inverse(normal);
  const rtucker::DenseMatrix ai = rtucker::matmul(a, inv);
  return rtucker::matmul(ai, rtucker::transpose(a));
}

// (X x_n M) by the elementwise summation formula; mode is 1-based.
inline rtucker::DenseTensor mode_product_naive(const rtucker::DenseTensor& t,
                                               const rtucker::DenseMatrix& m,
                                               std::size_t mode) {
  const std::size_t axis = mode - 1;
  std::vector<std::size_t> out_shape = t.shape();
  out_shape[axis] = m.rows();
  rtucker::DenseTensor out(out_shape);

  std::vector<std::size_t> idx(out_shape.size(), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double s = 0.0;
    std::vector<std::size_t> src = idx;
    for (std::size_t k = 0; k < t.dim(axis); ++k) {
      src[axis] = k;
      s += t.at(src) * m(idx[axis], k);
    }
    out[flat] = s;

    for (std::size_t n = out_shape.size(); n-- > 0;) {
      if (++idx[n] < out_shape[n]) break;
      idx[n] = 0;
    }
  }
  return out;
}

// Tucker reconstruction through the elementwise rank-1 sum.
inline rtucker::DenseTensor tucker_reconstruct_naive(
    const rtucker::DenseTensor& core, const std::vector<rtucker::DenseMatrix>& factors) {
  std::vector<std::size_t> shape(factors.size());
  for (std::size_t n = 0; n < factors.size(); ++n) shape[n] = factors[n].rows();
  rtucker::DenseTensor out(shape);

  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double total = 0.0;
    std::vector<std::size_t> r(core.order(), 0);
    for (std::size_t cflat = 0; cflat < core.size(); ++cflat) {
      double term = core[cflat];
      for (std::size_t n = 0; n < factors.size(); ++n) {
        term *= factors[n](idx[n], r[n]);
      }
      total += term;
      for (std::size_t n = core.order(); n-- > 0;) {
        if (++r[n] < core.dim(n)) break;
        r[n] = 0;
      }
    }
    out[flat] = total;
    for (std::size_t n = shape.size(); n-- > 0;) {
      if (++idx[n] < shape[n]) break;
      idx[n] = 0;
    }
  }
  return out;
}

// Max absolute violation of the four Penrose conditions for P ~ pinv(A).
inline double penrose_violation(const rtucker::DenseMatrix& a,
                                const rtucker::DenseMatrix& p) {
  using rtucker::matmul;
  using rtucker::transpose;
  const rtucker::DenseMatrix apa = matmul(matmul(a, p), a);
  const rtucker::DenseMatrix pap = matmul(matmul(p, a), p);
  const rtucker::DenseMatrix ap = matmul(a, p);
  const rtucker::DenseMatrix pa = matmul(p, a);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(apa.data()[i] - a.data()[i]));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(pap.data()[i] - p.data()[i]));
  }
  for (std::size_t i = 0; i < ap.rows(); ++i) {
    for (std::size_t j = 0; j < ap.cols(); ++j) {
      worst = std::max(worst, std::abs(ap(i, j) - ap(j, i)));
    }
  }
  for (std::size_t i = 0; i < pa.rows(); ++i) {
    for (std::size_t j = 0; j < pa.cols(); ++j) {
      worst = std::max(worst, std::abs(pa(i, j) - pa(j, i)));
    }
  }
  return worst;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

inline double max_abs_diff(const rtucker::DenseMatrix& a, const rtucker::DenseMatrix& b) {
  return max_abs_diff(std::span<const double>{a.data(), a.size()},
                      std::span<const double>{b.data(), b.size()});
}

}  // namespace oracles
