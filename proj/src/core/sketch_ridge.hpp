#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dense_matrix.hpp"
#include "leverage.hpp"
#include "sampler.hpp"

namespace rtucker {

// Row access to a design matrix that may never be materialized (e.g. a
// Kronecker product of factor matrices).
class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void copy_row(std::size_t i, std::span<double> out) const = 0;
};

class MatrixRowSource final : public RowSource {
 public:
  explicit MatrixRowSource(const DenseMatrix& m) : m_(&m) {}
  std::size_t rows() const override { return m_->rows(); }
  std::size_t cols() const override { return m_->cols(); }
  void copy_row(std::size_t i, std::span<double> out) const override {
    const auto r = m_->row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] = r[j];
  }

 private:
  const DenseMatrix* m_;
};

struct SketchConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  double lambda = 0.0;
  std::optional<std::size_t> sample_count_override;  // tests may shrink s
  std::uint64_t seed = 0;
};

// The sampling matrix S in factored form: s row indices into [0, n + d) and
// the rescaling weights 1 / sqrt(P(j) s). Duplicates are kept as separate
// rows (sampling with replacement); the dense s x (n + d) matrix is never
// formed.
struct RowSketch {
  std::vector<std::size_t> sampled_indices;
  std::vector<double> weights;

  std::size_t s() const { return sampled_indices.size(); }
};

struct SketchDiagnostics {
  std::size_t sample_count = 0;
  double beta_prime = 0.0;  // conservative bound reported for the realized run
  double sketched_objective = 0.0;
  bool rank_deficient = false;
  // Phase timings; the response gather is kept separate because it is the one
  // O(s) pass that touches the full-length response vector.
  double draw_seconds = 0.0;
  double gather_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct SketchedSolution {
  std::vector<double> x;
  RowSketch sketch;
  SketchDiagnostics diagnostics;
};

// Number of sampled rows: ceil(4 d / beta' * max{420 ln(4 d / delta), 1 / (delta epsilon)}).
std::size_t sample_count(double beta_prime, std::size_t d, double epsilon, double delta);

// Sketched ridge regression against an arbitrary row source and augmented
// distribution. Samples s rows of [A ; sqrt(lambda) I], forms the weighted
// sketched least-squares system and solves it through the normal equations.
// With probability >= 1 - delta the returned point has regularized objective
// within (1 + epsilon) of optimal, provided the distribution is a valid
// overestimate at the configured sample count.
//
// The sketch is a multiset of (index, weight) pairs; its meaning does not
// depend on draw order, so callers parallelizing the draws may merge
// per-chunk sketches in any order.
SketchedSolution solve_sketched_ridge(const RowSource& a, std::span<const double> b,
                                      const AugmentedRowDistribution& dist,
                                      double lambda, const SketchConfig& config);

// Convenience entry matching the dense use case: candidate scores are wrapped
// in an AugmentedSampler built with the given effective-dimension lower bound.
// Reads lambda from config.lambda.
SketchedSolution approximate_ridge_regression(const DenseMatrix& a,
                                              std::span<const double> b,
                                              const ScoreVector& candidate_scores,
                                              double d_eff_lower,
                                              const SketchConfig& config);

struct StructuralConditions {
  double cond1 = 0.0;  // sigma_min^2(S U_Abar); needs >= 1/sqrt(2)
  double cond2 = 0.0;  // ||U^T S^T S bperp||^2 / R^2; needs <= epsilon / 2
  double residual_sq = 0.0;  // R^2 of the augmented least-squares problem
};

// Evaluates both structural conditions of the sketching analysis for a sketch
// drawn against the system (a, b, lambda). When b lies in the column space of
// the augmented design (R^2 = 0), cond2 is reported as 0 by convention.
StructuralConditions verify_structural_conditions(const DenseMatrix& a,
                                                  std::span<const double> b,
                                                  const RowSketch& sketch,
                                                  double lambda);

// S M for a factored sketch over an (n + d)-row source; test and verification
// helper.
DenseMatrix apply_sketch(const RowSketch& sketch, const RowSource& rows);

}  // namespace rtucker
