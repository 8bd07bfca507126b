#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtucker {

AugmentedSampler::AugmentedSampler(std::vector<double> candidate_scores, std::size_t d,
                                   double d_eff_lower)
    : normalized_scores_(std::move(candidate_scores)), d_(d) {
  if (d_ == 0) {
    throw std::invalid_argument("AugmentedSampler: d must be positive");
  }
  if (d_eff_lower < 0.0 || d_eff_lower > static_cast<double>(d_)) {
    throw std::invalid_argument("AugmentedSampler: d_eff_lower outside [0, d]");
  }
  double l1 = 0.0;
  for (double s : normalized_scores_) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("AugmentedSampler: scores must be finite and non-negative");
    }
    l1 += s;
  }
  if (l1 <= 0.0) {
    throw std::invalid_argument("AugmentedSampler: scores must not all be zero");
  }

  const double scale = static_cast<double>(d_) / l1;
  cumulative_.resize(normalized_scores_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < normalized_scores_.size(); ++i) {
    normalized_scores_[i] *= scale;
    running += normalized_scores_[i];
    cumulative_[i] = running;
  }
  data_mass_ = running;  // = d up to rounding
  aug_mass_per_row_ = std::min(1.0, static_cast<double>(d_) - d_eff_lower);
  total_mass_ = data_mass_ + static_cast<double>(d_) * aug_mass_per_row_;
}

std::pair<std::size_t, double> AugmentedSampler::draw(SplitMix64& rng) const {
  const double u = rng.next_double() * total_mass_;
  if (u < data_mass_ || aug_mass_per_row_ == 0.0) {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(),
                                     std::min(u, data_mass_));
    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= normalized_scores_.size()) idx = normalized_scores_.size() - 1;
    // Zero-mass rows are never selected by upper_bound unless rounding lands
    // exactly on a plateau edge; walk back to the owning row in that case.
    while (idx > 0 && normalized_scores_[idx] == 0.0) --idx;
    return {idx, normalized_scores_[idx] / total_mass_};
  }
  std::size_t k = static_cast<std::size_t>((u - data_mass_) / aug_mass_per_row_);
  if (k >= d_) k = d_ - 1;
  return {normalized_scores_.size() + k, aug_mass_per_row_ / total_mass_};
}

double AugmentedSampler::probability(std::size_t index) const {
  if (index < normalized_scores_.size()) {
    return normalized_scores_[index] / total_mass_;
  }
  if (index < normalized_scores_.size() + d_) {
    return aug_mass_per_row_ / total_mass_;
  }
  throw std::out_of_range("AugmentedSampler: index outside [0, n + d)");
}

AugmentedSampler build_augmented(std::vector<double> candidate_scores, std::size_t d,
                                 double d_eff_lower) {
  return AugmentedSampler(std::move(candidate_scores), d, d_eff_lower);
}

double beta_prime(double beta, double l1_norm, std::size_t d, double d_eff,
                  double d_eff_lower) {
  if (beta <= 0.0 || l1_norm <= 0.0) {
    throw std::invalid_argument("beta_prime: beta and l1_norm must be positive");
  }
  if (d_eff <= 0.0 || d_eff > static_cast<double>(d)) {
    throw std::invalid_argument("beta_prime: d_eff outside (0, d]");
  }
  if (d_eff_lower < 0.0 || d_eff_lower > static_cast<double>(d)) {
    throw std::invalid_argument("beta_prime: d_eff_lower outside [0, d]");
  }
  const double dd = static_cast<double>(d);
  const double m = std::min(1.0, dd - d_eff_lower);
  const double first = (beta * dd / d_eff) / (1.0 + dd * m / l1_norm);
  const double second = 1.0 / (l1_norm / dd + m);
  return std::min(first, second);
}

double conservative_beta_prime(double beta, std::size_t d, double d_eff_lower) {
  if (beta <= 0.0) {
    throw std::invalid_argument("conservative_beta_prime: beta must be positive");
  }
  const double m = std::min(1.0, static_cast<double>(d) - d_eff_lower);
  return std::min(beta, 1.0) / (1.0 + m);
}

}  // namespace rtucker
