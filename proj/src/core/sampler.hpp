#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace rtucker {

// A distribution over the n + d rows of an augmented design matrix
// [A ; sqrt(lambda) I_d]: data rows carry candidate-score mass, each of the d
// regularizer rows carries min{1, d - d_eff_lower}. Implementations must
// report the exact probability of every index they return.
class AugmentedRowDistribution {
 public:
  virtual ~AugmentedRowDistribution() = default;

  virtual std::size_t data_rows() const = 0;    // n
  virtual std::size_t design_cols() const = 0;  // d
  virtual double aug_mass_per_row() const = 0;  // min{1, d - d_eff_lower}

  // (index in [0, n + d), probability of that index).
  virtual std::pair<std::size_t, double> draw(SplitMix64& rng) const = 0;
};

// Explicit augmented sampler: candidate scores are rescaled so their l1 norm
// equals d, a prefix-sum table supports O(log n) inverse-CDF draws over the
// data rows, and the d regularizer rows share uniform mass. The branch between
// the two blocks is folded into a single inverse-CDF draw over the total mass
// (one RNG call) rather than a separate coin flip.
class AugmentedSampler final : public AugmentedRowDistribution {
 public:
  AugmentedSampler(std::vector<double> candidate_scores, std::size_t d,
                   double d_eff_lower);

  std::size_t data_rows() const override { return normalized_scores_.size(); }
  std::size_t design_cols() const override { return d_; }
  double aug_mass_per_row() const override { return aug_mass_per_row_; }

  std::pair<std::size_t, double> draw(SplitMix64& rng) const override;

  // Probability of any index, data or augmented.
  double probability(std::size_t index) const;

  const std::vector<double>& normalized_scores() const { return normalized_scores_; }
  double total_mass() const { return total_mass_; }

 private:
  std::vector<double> normalized_scores_;  // l1 norm = d
  std::vector<double> cumulative_;         // prefix sums over data rows
  std::size_t d_ = 0;
  double aug_mass_per_row_ = 0.0;
  double data_mass_ = 0.0;
  double total_mass_ = 0.0;
};

AugmentedSampler build_augmented(std::vector<double> candidate_scores, std::size_t d,
                                 double d_eff_lower);

// The exact beta' of the augmented distribution when the candidate is a
// beta-overestimate with l1 norm l1_norm and the problem has effective
// dimension d_eff:
//   beta' = min{ (1 + d m / l1)^-1 * beta d / d_eff, (l1 / d + m)^-1 },
// with m = min{1, d - d_eff_lower}.
double beta_prime(double beta, double l1_norm, std::size_t d, double d_eff,
                  double d_eff_lower);

// Lower bound used by the solver: min{beta, 1} / (1 + min{1, d - d_eff_lower}).
// Never exceeds the exact value above once scores are normalized to l1 = d.
double conservative_beta_prime(double beta, std::size_t d, double d_eff_lower);

}  // namespace rtucker
