#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <vector>

#include "leverage.hpp"
#include "linalg.hpp"
#include "oracles.hpp"
#include "sampler.hpp"

using namespace rtucker;

TEST_CASE("uniform two-by-two augmented distribution") {
  const AugmentedSampler sampler({1.0, 1.0}, 2, 0.0);
  CHECK(sampler.aug_mass_per_row() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sampler.probability(i) == doctest::Approx(0.25));
  }
}

TEST_CASE("full effective dimension removes the augmented mass") {
  const AugmentedSampler sampler({3.0, 1.0}, 2, 2.0);
  CHECK(sampler.aug_mass_per_row() == 0.0);
  SplitMix64 rng(1);
  for (int t = 0; t < 100000; ++t) {
    const auto [index, prob] = sampler.draw(rng);
    CHECK(index < 2);
    CHECK(prob > 0.0);
  }
}

TEST_CASE("hand-computed augmented distribution with partial d_eff bound") {
  // scores (2,1,1) normalize to (1, .5, .5); aug mass min{1, 2-1} = 1 on each
  // of the two regularizer rows; total mass 4.
  const AugmentedSampler sampler({2.0, 1.0, 1.0}, 2, 1.0);
  const double expected[] = {0.25, 0.125, 0.125, 0.25, 0.25};
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(sampler.probability(i) == doctest::Approx(expected[i]).epsilon(1e-12));
    total += sampler.probability(i);
  }
  CHECK(std::abs(total - 1.0) < 1e-12);

  // Chi-squared goodness of fit over one million draws (4 dof; 23.51 is the
  // p = 1e-4 cutoff).
  SplitMix64 rng(42);
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  const std::size_t draws = 1000000;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto [index, prob] = sampler.draw(rng);
    CHECK(prob == doctest::Approx(expected[index]).epsilon(1e-12));
    counts[index] += 1;
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double expect = expected[i] * static_cast<double>(draws);
    const double diff = static_cast<double>(counts[i]) - expect;
    chi2 += diff * diff / expect;
  }
  CHECK(chi2 < 23.51);
}

TEST_CASE("draws are deterministic under a fixed seed") {
  const AugmentedSampler sampler({0.3, 1.2, 0.5, 2.0}, 3, 0.5);
  std::vector<std::size_t> first, second;
  {
    SplitMix64 rng(42);
    for (int t = 0; t < 1000; ++t) first.push_back(sampler.draw(rng).first);
  }
  {
    SplitMix64 rng(42);
    for (int t = 0; t < 1000; ++t) second.push_back(sampler.draw(rng).first);
  }
  CHECK(first == second);
}

TEST_CASE("zero-mass rows are never drawn") {
  const AugmentedSampler sampler({1.0, 0.0, 2.0, 0.0}, 2, 2.0);
  SplitMix64 rng(9);
  for (int t = 0; t < 50000; ++t) {
    const auto [index, prob] = sampler.draw(rng);
    CHECK((index == 0 || index == 2));
  }
}

TEST_CASE("build_augmented rejects invalid input") {
  CHECK_THROWS_AS(build_augmented({0.0, 0.0}, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_augmented({1.0}, 2, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(build_augmented({1.0}, 2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_augmented({-1.0, 2.0}, 2, 0.0), std::invalid_argument);
}

TEST_CASE("empirical frequencies match probabilities within binomial bounds") {
  const AugmentedSampler sampler({5.0, 1.0, 0.5, 3.5, 2.0}, 3, 1.5);
  const std::size_t n_indices = 5 + 3;
  std::vector<double> expected(n_indices);
  for (std::size_t i = 0; i < n_indices; ++i) expected[i] = sampler.probability(i);

  SplitMix64 rng(7);
  const std::size_t draws = 1000000;
  std::vector<std::size_t> counts(n_indices, 0);
  for (std::size_t t = 0; t < draws; ++t) counts[sampler.draw(rng).first] += 1;

  for (std::size_t i = 0; i < n_indices; ++i) {
    const double mean = expected[i] * static_cast<double>(draws);
    const double sigma = std::sqrt(mean * (1.0 - expected[i]));
    CHECK(std::abs(static_cast<double>(counts[i]) - mean) <= 4.0 * sigma + 1.0);
  }
}

TEST_CASE("beta_prime closed-form cases") {
  // Classical scores after normalization: l1 = d, rank = d, d_eff' = 0.
  // beta = d_eff / rank makes both branches collapse to 1/2.
  const std::size_t d = 4;
  const double d_eff = 2.5;
  const double beta = d_eff / static_cast<double>(d);
  CHECK(beta_prime(beta, 4.0, d, d_eff, 0.0) == doctest::Approx(0.5));

  // lambda = 0: full effective dimension, no augmented mass, recovers plain
  // leverage sampling.
  CHECK(beta_prime(1.0, 4.0, d, 4.0, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("beta_prime certified end to end against augmented leverage scores") {
  SplitMix64 rng(77);
  const DenseMatrix a = oracles::random_matrix(rng, 10, 3);
  const double lambda = 1.0;

  const ScoreVector exact = ridge_scores(a, lambda);
  const double d_eff = effective_dimension(exact);
  const double d_eff_lower = std::floor(d_eff);
  const AugmentedSampler sampler(exact.scores, 3, d_eff_lower);

  ScoreVector probabilities;
  probabilities.scores.resize(10 + 3);
  for (std::size_t i = 0; i < probabilities.scores.size(); ++i) {
    probabilities.scores[i] = sampler.probability(i);
  }
  const ScoreVector abar_scores = classical_scores(augmented_design(a, lambda));

  const double realized = check_beta_overestimate(probabilities, abar_scores);
  const double exact_bp = beta_prime(1.0, 3.0, 3, d_eff, d_eff_lower);
  CHECK(realized >= exact_bp - 1e-10);
}

TEST_CASE("conservative_beta_prime lower-bounds the direct formula") {
  CHECK(conservative_beta_prime(1.0, 4, 0.0) == doctest::Approx(0.5));
  CHECK(conservative_beta_prime(1.0, 4, 4.0) == doctest::Approx(1.0));
  CHECK(conservative_beta_prime(0.4, 4, 3.5) == doctest::Approx(0.4 / 1.5));

  SplitMix64 rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.next_below(5);
    const double d_eff = 0.2 + rng.next_double() * (static_cast<double>(d) - 0.2);
    const double d_eff_lower = rng.next_double() * d_eff;
    const double beta = 0.2 + rng.next_double();
    // At l1 = d (the algorithm's normalization) conservative never exceeds
    // the exact formula value.
    const double exact = beta_prime(beta, static_cast<double>(d), d, d_eff, d_eff_lower);
    CHECK(conservative_beta_prime(beta, d, d_eff_lower) <= exact + 1e-12);
  }
}

TEST_CASE("per-draw cost stays logarithmic in n") {
  SplitMix64 score_rng(5);
  auto make_scores = [&](std::size_t n) {
    std::vector<double> s(n);
    for (double& v : s) v = 0.01 + score_rng.next_double();
    return s;
  };
  const AugmentedSampler small(make_scores(1000), 4, 0.0);
  const AugmentedSampler large(make_scores(1000000), 4, 0.0);

  auto time_draws = [](const AugmentedSampler& sampler) {
    SplitMix64 rng(123);
    std::size_t sink = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < 400000; ++t) sink += sampler.draw(rng).first;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(sink > 0);
    return elapsed;
  };
  time_draws(small);  // warm-up
  const double t_small = time_draws(small);
  const double t_large = time_draws(large);
  // A thousandfold larger support must cost far less than linearly more;
  // allow a generous factor for cache effects on the 8 MB prefix table.
  CHECK(t_large < 50.0 * t_small + 1e-3);
}
