#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "leverage.hpp"
#include "sampler.hpp"
#include "sketch_ridge.hpp"
#include "svd.hpp"

namespace rtucker {

// Implicit Kronecker product K = A1 (x) A2 (x) ... (x) AN with
// O(sum I_n R_n + sum R_n^2) storage. Rows are indexed by tuples
// (i_1, ..., i_N) linearized with the last factor index fastest, matching the
// tensor module's canonical order so that vec(X) aligns with K's rows. Factor
// SVDs, classical leverage scores, and score CDFs are computed eagerly at
// construction and cached; factors are immutable once wrapped.
class ImplicitKronecker {
 public:
  explicit ImplicitKronecker(std::vector<DenseMatrix> factors);

  std::size_t factor_count() const { return factors_.size(); }
  const DenseMatrix& factor(std::size_t n) const { return factors_[n]; }
  const CompactSvd& factor_svd(std::size_t n) const { return svds_[n]; }
  const ScoreVector& factor_scores(std::size_t n) const { return scores_[n]; }

  std::size_t rows() const { return total_rows_; }
  std::size_t cols() const { return total_cols_; }

  std::size_t linearize(std::span<const std::size_t> idx) const;
  std::vector<std::size_t> delinearize(std::size_t flat) const;

  // Row (i_1, ..., i_N) = (x)_n a^(n)_{i_n:}, built by iterated outer
  // products in O(prod R_n).
  void copy_row(std::span<const std::size_t> idx, std::span<double> out) const;
  std::vector<double> row(std::span<const std::size_t> idx) const;

  // Classical (lambda = 0) leverage score of a row: the product of per-factor
  // scores.
  double factored_leverage_score(std::span<const std::size_t> idx) const;

  // Cross lambda-ridge leverage score from the cached factor SVDs, summing
  // over rank tuples of the factor SVDs in O(prod R_n * N).
  double ridge_cross_score(std::span<const std::size_t> row_idx,
                           std::span<const std::size_t> col_row_idx,
                           double lambda) const;

  // One draw from the product leverage-score distribution: each i_n sampled
  // independently from factor n's normalized scores via binary search.
  // Returns the index tuple and its joint probability.
  std::pair<std::vector<std::size_t>, double> sample_row_index(SplitMix64& rng) const;

  // sum over rows of the product score = prod_n rank(A^(n)).
  double score_l1() const { return score_l1_; }

  // Materializes the full Kronecker product; oracle/test use only.
  DenseMatrix materialize() const;

 private:
  std::vector<DenseMatrix> factors_;
  std::vector<CompactSvd> svds_;
  std::vector<ScoreVector> scores_;
  std::vector<std::vector<double>> score_cdfs_;
  std::vector<double> score_sums_;
  std::size_t total_rows_ = 1;
  std::size_t total_cols_ = 1;
  double score_l1_ = 1.0;
};

// RowSource adapter so the sketched solver can query K without materializing it.
class KroneckerRowSource final : public RowSource {
 public:
  explicit KroneckerRowSource(const ImplicitKronecker& k) : k_(&k) {}
  std::size_t rows() const override { return k_->rows(); }
  std::size_t cols() const override { return k_->cols(); }
  void copy_row(std::size_t i, std::span<double> out) const override;

 private:
  const ImplicitKronecker* k_;
};

// Augmented distribution whose data-row block is the product leverage-score
// distribution of K. Drawing costs O(sum log I_n); nothing of length
// prod I_n is ever built.
class ProductLeverageSampler final : public AugmentedRowDistribution {
 public:
  ProductLeverageSampler(const ImplicitKronecker& k, double d_eff_lower);

  std::size_t data_rows() const override { return k_->rows(); }
  std::size_t design_cols() const override { return k_->cols(); }
  double aug_mass_per_row() const override { return aug_mass_per_row_; }
  std::pair<std::size_t, double> draw(SplitMix64& rng) const override;

 private:
  const ImplicitKronecker* k_;
  double aug_mass_per_row_ = 0.0;
  double data_block_probability_ = 1.0;  // 1 / (1 + m) after normalization
};

}  // namespace rtucker
