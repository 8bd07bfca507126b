#include "sketch_ridge.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "linalg.hpp"

namespace rtucker {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Augmented row view over a data-row source: rows n..n+d-1 are sqrt(lambda) e_k.
class AugmentedRowView {
 public:
  AugmentedRowView(const RowSource& a, double lambda)
      : a_(&a), n_(a.rows()), d_(a.cols()), root_lambda_(std::sqrt(lambda)) {}

  void copy_row(std::size_t j, std::span<double> out) const {
    if (j < n_) {
      a_->copy_row(j, out);
      return;
    }
    for (std::size_t c = 0; c < d_; ++c) out[c] = 0.0;
    out[j - n_] = root_lambda_;
  }

 private:
  const RowSource* a_;
  std::size_t n_, d_;
  double root_lambda_;
};

}  // namespace

std::size_t sample_count(double beta_prime, std::size_t d, double epsilon, double delta) {
  if (beta_prime <= 0.0 || epsilon <= 0.0 || epsilon >= 1.0 || delta <= 0.0 ||
      delta >= 1.0 || d == 0) {
    throw std::invalid_argument("sample_count: parameters out of range");
  }
  const double dd = static_cast<double>(d);
  const double log_term = 420.0 * std::log(4.0 * dd / delta);
  const double tail_term = 1.0 / (delta * epsilon);
  const double s = std::ceil(4.0 * dd / beta_prime * std::max(log_term, tail_term));
  return static_cast<std::size_t>(s);
}

SketchedSolution solve_sketched_ridge(const RowSource& a, std::span<const double> b,
                                      const AugmentedRowDistribution& dist,
                                      double lambda, const SketchConfig& config) {
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  if (b.size() != n) {
    throw std::invalid_argument("solve_sketched_ridge: length(b) != rows(a)");
  }
  if (dist.data_rows() != n || dist.design_cols() != d) {
    throw std::invalid_argument("solve_sketched_ridge: distribution shape mismatch");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("solve_sketched_ridge: lambda must be non-negative");
  }

  SketchedSolution out;
  // conservative_beta_prime at beta = 1, the convention for callers passing
  // classical leverage scores as the overestimate.
  out.diagnostics.beta_prime = 1.0 / (1.0 + dist.aug_mass_per_row());
  const std::size_t s = config.sample_count_override
                            ? *config.sample_count_override
                            : sample_count(out.diagnostics.beta_prime, d,
                                           config.epsilon, config.delta);
  if (s == 0) {
    throw std::invalid_argument("solve_sketched_ridge: sample count must be >= 1");
  }
  out.diagnostics.sample_count = s;

  SplitMix64 rng(config.seed);
  auto t0 = std::chrono::steady_clock::now();
  out.sketch.sampled_indices.resize(s);
  out.sketch.weights.resize(s);
  const double inv_s = 1.0 / static_cast<double>(s);
  for (std::size_t t = 0; t < s; ++t) {
    const auto [index, prob] = dist.draw(rng);
    out.sketch.sampled_indices[t] = index;
    out.sketch.weights[t] = std::sqrt(inv_s / prob);
  }
  out.diagnostics.draw_seconds = seconds_since(t0);

  // Sampled entries of the augmented response; rows past n read 0.
  t0 = std::chrono::steady_clock::now();
  std::vector<double> sampled_b(s, 0.0);
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t j = out.sketch.sampled_indices[t];
    if (j < n) sampled_b[t] = b[j];
  }
  out.diagnostics.gather_seconds = seconds_since(t0);

  // Normal equations of the sketched system, accumulated streaming so the
  // s x d matrix need not be held when s is large. For moderate sizes the
  // arithmetic matches materializing S*Abar and calling solve_ls_exact, which
  // is how the unit oracles check this path.
  t0 = std::chrono::steady_clock::now();
  const AugmentedRowView abar(a, lambda);
  DenseMatrix gram_sketch(d, d);
  std::vector<double> rhs(d, 0.0);
  std::vector<double> row(d);
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t j = out.sketch.sampled_indices[t];
    const double w = out.sketch.weights[t];
    abar.copy_row(j, row);
    const double w2 = w * w;
    for (std::size_t p = 0; p < d; ++p) {
      const double v = w2 * row[p];
      if (v == 0.0) continue;
      double* grow = gram_sketch.data() + p * d;
      for (std::size_t q = p; q < d; ++q) grow[q] += v * row[q];
    }
    const double wb = w2 * sampled_b[t];
    if (wb != 0.0) {
      for (std::size_t p = 0; p < d; ++p) rhs[p] += wb * row[p];
    }
  }
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < p; ++q) gram_sketch(p, q) = gram_sketch(q, p);
  }

  const CompactSvd gram_svd = compact_svd(gram_sketch);
  out.diagnostics.rank_deficient = gram_svd.rank() < d;
  // x = (G)^+ rhs via the SVD of the sketched Gram.
  out.x.assign(d, 0.0);
  for (std::size_t k = 0; k < gram_svd.rank(); ++k) {
    double uk_rhs = 0.0;
    for (std::size_t p = 0; p < d; ++p) uk_rhs += gram_svd.u(p, k) * rhs[p];
    const double coeff = uk_rhs / gram_svd.singular_values[k];
    for (std::size_t p = 0; p < d; ++p) out.x[p] += coeff * gram_svd.vt(k, p);
  }
  out.diagnostics.solve_seconds = seconds_since(t0);

  // ||S Abar x - S bbar||^2 over the factored sketch.
  double sketched_obj = 0.0;
  for (std::size_t t = 0; t < s; ++t) {
    abar.copy_row(out.sketch.sampled_indices[t], row);
    const double r = out.sketch.weights[t] * (dot(row, out.x) - sampled_b[t]);
    sketched_obj += r * r;
  }
  out.diagnostics.sketched_objective = sketched_obj;
  return out;
}

SketchedSolution approximate_ridge_regression(const DenseMatrix& a,
                                              std::span<const double> b,
                                              const ScoreVector& candidate_scores,
                                              double d_eff_lower,
                                              const SketchConfig& config) {
  if (candidate_scores.size() != a.rows()) {
    throw std::invalid_argument("approximate_ridge_regression: score length != rows(a)");
  }
  const AugmentedSampler sampler(candidate_scores.scores, a.cols(), d_eff_lower);
  const MatrixRowSource source(a);
  return solve_sketched_ridge(source, b, sampler, config.lambda, config);
}

StructuralConditions verify_structural_conditions(const DenseMatrix& a,
                                                  std::span<const double> b,
                                                  const RowSketch& sketch,
                                                  double lambda) {
  const DenseMatrix abar = augmented_design(a, lambda);
  const std::vector<double> bbar = augmented_response(b, a.cols());
  const CompactSvd svd = compact_svd(abar);
  const std::size_t nd = abar.rows();
  const std::size_t r = svd.rank();

  // bperp = bbar - U U^T bbar.
  std::vector<double> ut_b(r, 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < nd; ++i) ut_b[k] += svd.u(i, k) * bbar[i];
  }
  std::vector<double> bperp = bbar;
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < nd; ++i) bperp[i] -= svd.u(i, k) * ut_b[k];
  }

  StructuralConditions out;
  out.residual_sq = norm2_squared(bperp);

  // cond1 = lambda_min of (S U)^T (S U), accumulated over the factored sketch.
  DenseMatrix gram_su(r, r);
  std::vector<double> urow(r);
  std::vector<double> stsb(r, 0.0);  // U^T S^T S bperp
  for (std::size_t t = 0; t < sketch.s(); ++t) {
    const std::size_t j = sketch.sampled_indices[t];
    const double w2 = sketch.weights[t] * sketch.weights[t];
    for (std::size_t k = 0; k < r; ++k) urow[k] = svd.u(j, k);
    for (std::size_t p = 0; p < r; ++p) {
      const double v = w2 * urow[p];
      for (std::size_t q = p; q < r; ++q) gram_su(p, q) += v * urow[q];
    }
    const double wb = w2 * bperp[j];
    for (std::size_t k = 0; k < r; ++k) stsb[k] += wb * urow[k];
  }
  for (std::size_t p = 0; p < r; ++p) {
    for (std::size_t q = 0; q < p; ++q) gram_su(p, q) = gram_su(q, p);
  }
  const SymmetricEigen eig = symmetric_eigen(gram_su);
  out.cond1 = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
  out.cond2 = out.residual_sq > 0.0 ? norm2_squared(stsb) / out.residual_sq : 0.0;
  return out;
}

DenseMatrix apply_sketch(const RowSketch& sketch, const RowSource& rows) {
  DenseMatrix out(sketch.s(), rows.cols());
  std::vector<double> row(rows.cols());
  for (std::size_t t = 0; t < sketch.s(); ++t) {
    rows.copy_row(sketch.sampled_indices[t], row);
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      out(t, j) = sketch.weights[t] * row[j];
    }
  }
  return out;
}

}  // namespace rtucker
