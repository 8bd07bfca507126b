#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dense_matrix.hpp"
#include "kronecker.hpp"
#include "leverage.hpp"
#include "linalg.hpp"
#include "missing.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "sketch_ridge.hpp"
#include "svd.hpp"

namespace rtucker::verify {

namespace {

DenseMatrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data()[i] = 2.0 * rng.next_double() - 1.0;
  }
  return m;
}

class Recorder {
 public:
  explicit Recorder(std::string suite) : start_(std::chrono::steady_clock::now()) {
    result_.suite = std::move(suite);
  }

  // Records the running maximum of `observed` for a <= style check.
  void observe_max(const std::string& name, double observed, double bound) {
    Check* c = find(name, bound);
    if (observed > c->observed) c->observed = observed;
  }

  // Records the running minimum for a >= style check (bound is the floor).
  void observe_min(const std::string& name, double observed, double bound) {
    Check* c = find(name, bound, /*is_min=*/true);
    if (observed < c->observed) c->observed = observed;
  }

  SuiteResult finish() {
    result_.passed = true;
    for (std::size_t k = 0; k < result_.checks.size(); ++k) {
      const bool ok = min_style_[k] ? result_.checks[k].observed >= result_.checks[k].bound
                                    : result_.checks[k].observed <= result_.checks[k].bound;
      result_.checks[k].passed = ok;
      if (!ok) result_.passed = false;
    }
    result_.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

 private:
  Check* find(const std::string& name, double bound, bool is_min = false) {
    for (std::size_t k = 0; k < result_.checks.size(); ++k) {
      if (result_.checks[k].name == name) return &result_.checks[k];
    }
    Check c;
    c.name = name;
    c.bound = bound;
    c.observed = is_min ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
    result_.checks.push_back(std::move(c));
    min_style_.push_back(is_min);
    return &result_.checks.back();
  }

  SuiteResult result_;
  std::vector<bool> min_style_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

SuiteResult leverage_suite(std::uint64_t seed, std::size_t trials) {
  Recorder rec("leverage");
  SplitMix64 rng(seed);
  const double lambdas[] = {0.0, 0.01, 0.5, 2.0};

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 2 + rng.next_below(49);  // up to 50
    const std::size_t d = 1 + rng.next_below(8);   // up to 8
    const DenseMatrix a = random_matrix(rng, n, d);
    const CompactSvd svd = compact_svd(a);
    const double lambda = lambdas[trial % 4];

    const ScoreVector svd_form = ridge_scores(svd, n, lambda);
    const ScoreVector pinv_form = ridge_scores_pinv_form(a, lambda);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_diff = std::max(max_diff, std::abs(svd_form.scores[i] - pinv_form.scores[i]));
    }
    rec.observe_max("svd_form_vs_pinv_form", max_diff, 1e-9);

    double deff_svd = 0.0;
    for (double s : svd.singular_values) {
      deff_svd += s * s / (s * s + lambda);
    }
    rec.observe_max("effective_dimension_vs_singular_sum",
                    std::abs(effective_dimension(svd_form) - deff_svd), 1e-9);
    rec.observe_max("effective_dimension_at_most_rank",
                    effective_dimension(svd_form) - static_cast<double>(svd.rank()),
                    1e-9);

    // Augmented-design equality: ridge scores of A equal the classical scores
    // of [A ; sqrt(lambda) I] on the first n rows.
    if (lambda > 0.0) {
      const DenseMatrix abar = augmented_design(a, lambda);
      const ScoreVector abar_scores = classical_scores(abar);
      double max_aug = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        max_aug = std::max(max_aug, std::abs(svd_form.scores[i] - abar_scores.scores[i]));
      }
      rec.observe_max("augmented_design_equality", max_aug, 1e-9);
    }

    // 0 <= ridge score <= classical score <= 1.
    const ScoreVector classical = ridge_scores(svd, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      rec.observe_min("scores_nonnegative", svd_form.scores[i], -1e-12);
      rec.observe_max("ridge_at_most_classical",
                      svd_form.scores[i] - classical.scores[i], 1e-12);
      rec.observe_max("classical_at_most_one", classical.scores[i], 1.0 + 1e-12);
    }

    // Cross-score sum rule on one row: equality at lambda = 0, else below.
    const std::size_t probe = rng.next_below(n);
    const std::vector<double> cross = cross_score_row(svd, n, probe, lambda);
    const double sum_sq = norm2_squared(cross);
    if (lambda == 0.0) {
      rec.observe_max("sum_squared_cross_equality_at_zero",
                      std::abs(sum_sq - svd_form.scores[probe]), 1e-10);
    } else {
      rec.observe_max("sum_squared_cross_below_score",
                      sum_sq - svd_form.scores[probe], 1e-12);
    }
  }
  return rec.finish();
}

SuiteResult kronecker_suite(std::uint64_t seed, std::size_t trials) {
  Recorder rec("kronecker");
  SplitMix64 rng(seed);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t order = 2 + trial % 2;
    std::vector<DenseMatrix> factors;
    std::size_t total_rows = 1;
    for (std::size_t n = 0; n < order; ++n) {
      const std::size_t rows = 2 + rng.next_below(order == 2 ? 7 : 5);
      const std::size_t cols = 1 + rng.next_below(3);
      factors.push_back(random_matrix(rng, rows, cols));
      total_rows *= rows;
    }
    const ImplicitKronecker k(factors);
    const DenseMatrix dense = k.materialize();
    const double lambda = 0.1 + rng.next_double();

    // Factored classical scores match the materialized matrix row by row.
    const ScoreVector exact = classical_scores(dense);
    double max_diff = 0.0;
    for (std::size_t flat = 0; flat < total_rows; ++flat) {
      const auto idx = k.delinearize(flat);
      max_diff =
          std::max(max_diff, std::abs(k.factored_leverage_score(idx) - exact.scores[flat]));
    }
    rec.observe_max("factored_scores_vs_materialized", max_diff, 1e-9);

    // Ridge cross scores from the factor SVDs match the materialized cross
    // matrix on sampled pairs.
    const CrossScoreMatrix cross = cross_scores(dense, lambda);
    double max_cross = 0.0;
    for (std::size_t probe = 0; probe < 20; ++probe) {
      const std::size_t i = rng.next_below(total_rows);
      const std::size_t j = rng.next_below(total_rows);
      const double fast =
          k.ridge_cross_score(k.delinearize(i), k.delinearize(j), lambda);
      max_cross = std::max(max_cross, std::abs(fast - cross.l(i, j)));
    }
    rec.observe_max("ridge_cross_scores_vs_materialized", max_cross, 1e-9);

    // Eigenvalues of the cross-score matrix are prod sigma^2 / (prod sigma^2 + lambda)
    // over rank tuples (padded with zeros up to n).
    if (total_rows <= 64) {
      std::vector<double> expected;
      std::vector<std::size_t> t(order, 0);
      bool more = true;
      while (more) {
        double sigma2 = 1.0;
        for (std::size_t n = 0; n < order; ++n) {
          const double s = k.factor_svd(n).singular_values[t[n]];
          sigma2 *= s * s;
        }
        expected.push_back(sigma2 / (sigma2 + lambda));
        more = false;
        for (std::size_t n = order; n-- > 0;) {
          if (++t[n] < k.factor_svd(n).rank()) {
            more = true;
            break;
          }
          t[n] = 0;
        }
      }
      expected.resize(total_rows, 0.0);
      std::sort(expected.begin(), expected.end(), std::greater<>());
      const SymmetricEigen eig = symmetric_eigen(cross.l);
      double max_eig = 0.0;
      for (std::size_t i = 0; i < total_rows; ++i) {
        max_eig = std::max(max_eig, std::abs(eig.eigenvalues[i] - expected[i]));
      }
      rec.observe_max("cross_matrix_eigenvalue_formula", max_eig, 1e-8);
    }
  }
  return rec.finish();
}

SuiteResult missing_suite(std::uint64_t seed, std::size_t trials) {
  Recorder rec("missing");
  SplitMix64 rng(seed);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 6 + rng.next_below(7);
    const std::size_t d = 2 + rng.next_below(3);
    const DenseMatrix a = random_matrix(rng, n, d);
    const double lambda = 0.05 + 2.0 * rng.next_double();
    const std::size_t remove_count = 1 + rng.next_below(n - 2);

    std::vector<std::size_t> removed;
    {
      std::vector<std::size_t> pool(n);
      for (std::size_t i = 0; i < n; ++i) pool[i] = i;
      for (std::size_t k = 0; k < remove_count; ++k) {
        const std::size_t j = k + rng.next_below(n - k);
        std::swap(pool[k], pool[j]);
        removed.push_back(pool[k]);
      }
    }

    const RowRemovalContext ctx(a, removed, lambda);
    const ScoreVector updated = ctx.exact_scores_after_removal();
    const ScoreVector bound = ctx.score_upper_bound_after_removal();

    // Oracle: rebuild the reduced matrix and recompute from scratch.
    const auto& kept = ctx.kept();
    DenseMatrix reduced(kept.size(), d);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      for (std::size_t j = 0; j < d; ++j) reduced(k, j) = a(kept[k], j);
    }
    const ScoreVector recomputed = ridge_scores(reduced, lambda);
    const ScoreVector original = ridge_scores(a, lambda);

    for (std::size_t k = 0; k < kept.size(); ++k) {
      rec.observe_max("woodbury_update_vs_recomputation",
                      std::abs(updated.scores[k] - recomputed.scores[k]), 1e-8);
      rec.observe_min("bound_dominates_exact",
                      bound.scores[k] - updated.scores[k], -1e-9);
      rec.observe_min("scores_never_decrease",
                      updated.scores[k] - original.scores[kept[k]], -1e-10);
    }

    // Sum rule, at the trial lambda and at zero.
    const std::size_t probe = rng.next_below(n);
    const ScoreVector zero_scores = classical_scores(a);
    rec.observe_max("sum_squared_cross_equality_at_zero",
                    std::abs(sum_squared_cross_bound(a, 0.0, probe) -
                             zero_scores.scores[probe]),
                    1e-10);
    rec.observe_max("sum_squared_cross_below_score",
                    sum_squared_cross_bound(a, lambda, probe) -
                        original.scores[probe],
                    1e-12);

    // The Kronecker coefficient dominates 1 / (1 - lambda_max)
    // for arbitrary removal sets.
    if (trial % 10 == 0) {
      std::vector<DenseMatrix> factors;
      factors.push_back(random_matrix(rng, 3, 2));
      factors.push_back(random_matrix(rng, 4, 2));
      const ImplicitKronecker kron(factors);
      const DenseMatrix dense = kron.materialize();
      const double klambda = 0.2 + rng.next_double();
      const double coeff = kronecker_removal_coefficient(kron, klambda);
      const CrossScoreMatrix cross = cross_scores(dense, klambda);
      for (std::size_t rep = 0; rep < 5; ++rep) {
        const std::size_t rc = 1 + rng.next_below(dense.rows() - 2);
        std::vector<std::size_t> rem;
        std::vector<std::size_t> pool(dense.rows());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        for (std::size_t kk = 0; kk < rc; ++kk) {
          const std::size_t j = kk + rng.next_below(pool.size() - kk);
          std::swap(pool[kk], pool[j]);
          rem.push_back(pool[kk]);
        }
        DenseMatrix sub(rc, rc);
        for (std::size_t p = 0; p < rc; ++p) {
          for (std::size_t q = 0; q < rc; ++q) sub(p, q) = cross.l(rem[p], rem[q]);
        }
        const double inv_gap = 1.0 / (1.0 - max_eigenvalue_symmetric(sub));
        rec.observe_min("kronecker_coefficient_dominates", coeff - inv_gap, -1e-9);
      }
    }
  }
  return rec.finish();
}

SuiteResult structural_suite(std::uint64_t seed, std::size_t embedding_trials,
                             std::size_t product_sketches) {
  Recorder rec("structural");
  SplitMix64 rng(seed);

  // Part 1: subspace-embedding condition at the formula sample count on
  // a 30 x 3 system sampled from the augmented classical-score distribution.
  {
    const double delta = 0.25;
    const double epsilon = 0.5;
    const double lambda = 0.1;
    const DenseMatrix a = random_matrix(rng, 30, 3);
    const std::vector<double> b = [&] {
      std::vector<double> v(30);
      for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
      return v;
    }();
    const ScoreVector candidate = classical_scores(a);

    std::size_t cond1_hits = 0;
    for (std::size_t trial = 0; trial < embedding_trials; ++trial) {
      SketchConfig cfg;
      cfg.epsilon = epsilon;
      cfg.delta = delta;
      cfg.lambda = lambda;
      cfg.seed = rng.next_u64();
      const SketchedSolution sol =
          approximate_ridge_regression(a, b, candidate, 0.0, cfg);
      const StructuralConditions cond =
          verify_structural_conditions(a, b, sol.sketch, lambda);
      if (cond.cond1 >= 1.0 / std::sqrt(2.0)) ++cond1_hits;
    }
    const double hit_rate = static_cast<double>(cond1_hits) /
                            static_cast<double>(embedding_trials);
    rec.observe_min("subspace_embedding_hit_rate", hit_rate, 1.0 - delta);
  }

  // Part 2: approximate matrix multiplication on an 8 x 2 system. The sampled
  // product (S U)^T (S bperp) is unbiased for U^T bperp = 0 and its mean
  // squared Frobenius error obeys the 1 / (beta' s) bound.
  {
    const double lambda = 0.3;
    const std::size_t s = 32;
    const DenseMatrix a = random_matrix(rng, 8, 2);
    std::vector<double> b(8);
    for (double& x : b) x = 2.0 * rng.next_double() - 1.0;

    const DenseMatrix abar = augmented_design(a, lambda);
    const std::vector<double> bbar = augmented_response(b, 2);
    const CompactSvd svd = compact_svd(abar);
    const std::size_t r = svd.rank();

    std::vector<double> ut_b(r, 0.0);
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < abar.rows(); ++i) ut_b[k] += svd.u(i, k) * bbar[i];
    }
    std::vector<double> bperp = bbar;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < abar.rows(); ++i) bperp[i] -= svd.u(i, k) * ut_b[k];
    }

    const ScoreVector candidate = classical_scores(a);
    const AugmentedSampler sampler(candidate.scores, 2, 0.0);
    const ScoreVector abar_scores = classical_scores(abar);
    ScoreVector probs;
    probs.scores.resize(abar.rows());
    for (std::size_t i = 0; i < abar.rows(); ++i) probs.scores[i] = sampler.probability(i);
    const double beta_realized = check_beta_overestimate(probs, abar_scores);

    double mean_sq_err = 0.0;
    SplitMix64 mc(rng.next_u64());
    for (std::size_t sketch_i = 0; sketch_i < product_sketches; ++sketch_i) {
      std::vector<double> est(r, 0.0);  // (S U)^T (S bperp); truth is 0
      for (std::size_t t = 0; t < s; ++t) {
        const auto [j, p] = sampler.draw(mc);
        const double w2 = 1.0 / (p * static_cast<double>(s));
        for (std::size_t k = 0; k < r; ++k) est[k] += w2 * svd.u(j, k) * bperp[j];
      }
      mean_sq_err += norm2_squared(est);
    }
    mean_sq_err /= static_cast<double>(product_sketches);

    const double u_frob_sq = static_cast<double>(r);
    const double bound = u_frob_sq * norm2_squared(bperp) /
                         (beta_realized * static_cast<double>(s));
    rec.observe_max("matrix_multiplication_variance_bound", mean_sq_err, bound * 1.2);
  }
  return rec.finish();
}

std::vector<std::string> suite_names() {
  return {"leverage", "kronecker", "missing", "structural"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "leverage") return leverage_suite(seed);
  if (name == "kronecker") return kronecker_suite(seed);
  if (name == "missing") return missing_suite(seed);
  if (name == "structural") return structural_suite(seed);
  throw std::invalid_argument("run_suite: unknown suite " + name);
}

}  // namespace rtucker::verify
