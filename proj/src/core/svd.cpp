#include "svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rtucker {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-14;

// One-sided Jacobi on the columns of W (m x n, m >= n). V accumulates the
// right rotations. On return the columns of W are mutually orthogonal: every
// off-diagonal Gram entry is below 1e-14 * ||A||_F^2 and also small relative
// to its own column norms. The relative trigger matters for rank-deficient
// input, where near-null columns shrink below the absolute threshold while
// still mutually parallel.
void jacobi_orthogonalize(DenseMatrix& w, DenseMatrix& v, double frob_sq) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  const double threshold = kOffDiagTol * frob_sq;
  const double relative_tol =
      static_cast<double>(std::max<std::size_t>(16, std::max(m, n))) *
      std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          alpha += wp * wp;
          beta += wq * wq;
          gamma += wp * wq;
        }
        if (std::abs(gamma) <= threshold &&
            std::abs(gamma) <= relative_tol * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("compact_svd: Jacobi sweeps did not converge");
}

CompactSvd svd_tall(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix w = a;
  DenseMatrix v = DenseMatrix::identity(n);

  double frob_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) frob_sq += a.data()[i] * a.data()[i];

  jacobi_orthogonalize(w, v, frob_sq);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
    norms[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  const double sigma_max = norms.empty() ? 0.0 : norms[order[0]];
  const double cutoff = static_cast<double>(std::max(m, n)) *
                        std::numeric_limits<double>::epsilon() * sigma_max;

  std::size_t rank = 0;
  while (rank < n && norms[order[rank]] > cutoff && norms[order[rank]] > 0.0) ++rank;

  CompactSvd out;
  out.singular_values.resize(rank);
  out.u = DenseMatrix(m, rank);
  out.vt = DenseMatrix(rank, n);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t j = order[k];
    const double sigma = norms[j];
    out.singular_values[k] = sigma;
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / sigma;
    for (std::size_t i = 0; i < n; ++i) out.vt(k, i) = v(i, j);
  }
  return out;
}

}  // namespace

CompactSvd compact_svd(const DenseMatrix& a) {
  if (a.empty()) {
    throw std::invalid_argument("compact_svd: empty matrix");
  }
  if (a.rows() >= a.cols()) {
    return svd_tall(a);
  }
  // Wide input: factor the transpose and swap the bases.
  CompactSvd t = svd_tall(transpose(a));
  CompactSvd out;
  out.singular_values = std::move(t.singular_values);
  out.u = transpose(t.vt);
  out.vt = transpose(t.u);
  return out;
}

SymmetricEigen symmetric_eigen(const DenseMatrix& m, bool want_vectors) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("symmetric_eigen: matrix not square");
  }
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);

  double frob_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) frob_sq += a.data()[i] * a.data()[i];
  const double threshold = kOffDiagTol * std::max(frob_sq, 1e-300);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= threshold) continue;
        rotated = true;

        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
    if (sweep == kMaxSweeps - 1) {
      throw NumericalError("symmetric_eigen: Jacobi sweeps did not converge");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymmetricEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a(order[k], order[k]);
  if (want_vectors) {
    out.eigenvectors = DenseMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
  }
  return out;
}

double max_eigenvalue_symmetric(const DenseMatrix& m) {
  return symmetric_eigen(m).eigenvalues.front();
}

}  // namespace rtucker
