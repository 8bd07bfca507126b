#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "kronecker.hpp"
#include "leverage.hpp"
#include "oracles.hpp"

using namespace rtucker;

TEST_CASE("single-factor product returns factor rows") {
  SplitMix64 rng(501);
  const DenseMatrix a = oracles::random_matrix(rng, 4, 3);
  const ImplicitKronecker k({a});
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t idx[1] = {i};
    CHECK(oracles::max_abs_diff(k.row(idx), std::vector<double>(a.row(i).begin(),
                                                                a.row(i).end())) == 0.0);
  }
}

TEST_CASE("rows match the materialized Kronecker product") {
  SplitMix64 rng(502);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 2, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const DenseMatrix dense = k.materialize();
  REQUIRE(dense.rows() == 4);
  REQUIRE(dense.cols() == 4);
  for (std::size_t flat = 0; flat < 4; ++flat) {
    const auto idx = k.delinearize(flat);
    CHECK(k.linearize(idx) == flat);
    const std::vector<double> row = k.row(idx);
    CHECK(oracles::max_abs_diff(
              row, std::vector<double>(dense.row(flat).begin(), dense.row(flat).end())) <
          1e-15);
  }
}

TEST_CASE("all-ones factors give all-ones rows") {
  std::vector<DenseMatrix> factors = {DenseMatrix(2, 3, std::vector<double>(6, 1.0)),
                                      DenseMatrix(3, 2, std::vector<double>(6, 1.0))};
  const ImplicitKronecker k(factors);
  const std::size_t idx[2] = {1, 2};
  for (double v : k.row(idx)) CHECK(v == 1.0);
  CHECK_THROWS_AS(k.row(std::vector<std::size_t>{2, 0}), std::out_of_range);
}

TEST_CASE("factored leverage scores are exact for identity factors") {
  std::vector<DenseMatrix> factors = {DenseMatrix::identity(2), DenseMatrix::identity(3)};
  const ImplicitKronecker k(factors);
  for (std::size_t flat = 0; flat < 6; ++flat) {
    CHECK(k.factored_leverage_score(k.delinearize(flat)) == doctest::Approx(1.0));
  }
}

TEST_CASE("factored leverage scores match the materialized matrix") {
  SplitMix64 rng(503);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 4, 2)};
  const ImplicitKronecker k(factors);
  const ScoreVector exact = classical_scores(k.materialize());
  for (std::size_t flat = 0; flat < 12; ++flat) {
    CHECK(std::abs(k.factored_leverage_score(k.delinearize(flat)) -
                   exact.scores[flat]) < 1e-9);
  }
}

TEST_CASE("a zero row in any factor zeroes the product score") {
  SplitMix64 rng(504);
  DenseMatrix a = oracles::random_matrix(rng, 3, 2);
  a(1, 0) = 0.0;
  a(1, 1) = 0.0;
  const ImplicitKronecker k({a, oracles::random_matrix(rng, 2, 2)});
  const std::size_t idx[2] = {1, 0};
  CHECK(k.factored_leverage_score(idx) == 0.0);
}

TEST_CASE("ridge cross scores at lambda zero factor into per-factor products") {
  SplitMix64 rng(505);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const DenseMatrix dense = k.materialize();
  const CrossScoreMatrix cross = cross_scores(dense, 0.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto idx = k.delinearize(i);
    CHECK(k.ridge_cross_score(idx, idx, 0.0) ==
          doctest::Approx(k.factored_leverage_score(idx)).epsilon(1e-10));
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(k.ridge_cross_score(idx, k.delinearize(j), 0.0) - cross.l(i, j)) <
            1e-9);
    }
  }
}

TEST_CASE("ridge cross scores match the materialized matrix at positive lambda") {
  SplitMix64 rng(506);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const CrossScoreMatrix cross = cross_scores(k.materialize(), 0.7);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(k.ridge_cross_score(k.delinearize(i), k.delinearize(j), 0.7) -
                     cross.l(i, j)) < 1e-9);
    }
  }
}

TEST_CASE("three-factor cross scores against materialization") {
  SplitMix64 rng(507);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2),
                                      oracles::random_matrix(rng, 3, 3)};
  const ImplicitKronecker k(factors);
  const DenseMatrix dense = k.materialize();
  REQUIRE(dense.rows() == 18);
  const CrossScoreMatrix cross = cross_scores(dense, 0.35);
  const ScoreVector exact = classical_scores(dense);
  for (std::size_t i = 0; i < 18; ++i) {
    CHECK(std::abs(k.factored_leverage_score(k.delinearize(i)) - exact.scores[i]) <
          1e-9);
    CHECK(std::abs(k.ridge_cross_score(k.delinearize(i), k.delinearize(i), 0.35) -
                   cross.l(i, i)) < 1e-9);
  }
}

TEST_CASE("cross scores decay as inner products over lambda") {
  SplitMix64 rng(508);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const double lambda = 1e6;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      const auto idx_i = k.delinearize(i);
      const auto idx_j = k.delinearize(j);
      const double inner = dot(k.row(idx_i), k.row(idx_j));
      if (std::abs(inner) < 1e-3) continue;
      const double score = k.ridge_cross_score(idx_i, idx_j, lambda);
      CHECK(score * lambda / inner == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("identity factors sample uniformly") {
  std::vector<DenseMatrix> factors = {DenseMatrix::identity(2), DenseMatrix::identity(2)};
  const ImplicitKronecker k(factors);
  SplitMix64 rng(509);
  std::size_t counts[4] = {0, 0, 0, 0};
  const std::size_t draws = 100000;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto [idx, prob] = k.sample_row_index(rng);
    CHECK(prob == doctest::Approx(0.25));
    counts[k.linearize(idx)] += 1;
  }
  double chi2 = 0.0;
  for (std::size_t c : counts) {
    const double diff = static_cast<double>(c) - 25000.0;
    chi2 += diff * diff / 25000.0;
  }
  CHECK(chi2 < 21.11);  // 3 dof, p = 1e-4
}

TEST_CASE("joint sampling frequencies factor into the marginals") {
  SplitMix64 rng(510);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 3, 2)};
  const ImplicitKronecker k(factors);

  std::map<std::size_t, std::size_t> counts;
  const std::size_t draws = 100000;
  SplitMix64 draw_rng(511);
  for (std::size_t t = 0; t < draws; ++t) {
    const auto [idx, prob] = k.sample_row_index(draw_rng);
    counts[k.linearize(idx)] += 1;
  }
  for (std::size_t flat = 0; flat < 9; ++flat) {
    const auto idx = k.delinearize(flat);
    double p = 1.0;
    for (std::size_t n = 0; n < 2; ++n) {
      const ScoreVector& s = k.factor_scores(n);
      p *= s.scores[idx[n]] / s.l1_norm();
    }
    const double mean = p * static_cast<double>(draws);
    const double sigma = std::sqrt(mean * (1.0 - p));
    CHECK(std::abs(static_cast<double>(counts[flat]) - mean) <= 4.0 * sigma + 1.0);
  }
}

TEST_CASE("sampling is deterministic under a fixed seed") {
  SplitMix64 rng(512);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 4, 2),
                                      oracles::random_matrix(rng, 3, 2)};
  const ImplicitKronecker k(factors);
  std::vector<std::size_t> a, b;
  {
    SplitMix64 s(77);
    for (int t = 0; t < 500; ++t) a.push_back(k.linearize(k.sample_row_index(s).first));
  }
  {
    SplitMix64 s(77);
    for (int t = 0; t < 500; ++t) b.push_back(k.linearize(k.sample_row_index(s).first));
  }
  CHECK(a == b);
}

TEST_CASE("augmented product sampler matches the explicit augmented sampler") {
  SplitMix64 rng(513);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const double d_eff_lower = 1.0;
  const ProductLeverageSampler fast(k, d_eff_lower);

  // Explicit reference distribution over the 6 + 4 indices.
  std::vector<double> scores(6);
  for (std::size_t flat = 0; flat < 6; ++flat) {
    scores[flat] = k.factored_leverage_score(k.delinearize(flat));
  }
  const AugmentedSampler reference(scores, 4, d_eff_lower);

  SplitMix64 draw_rng(514);
  for (int t = 0; t < 20000; ++t) {
    const auto [index, prob] = fast.draw(draw_rng);
    CHECK(prob == doctest::Approx(reference.probability(index)).epsilon(1e-9));
  }
}

TEST_CASE("an all-zero factor degrades gracefully") {
  SplitMix64 rng(516);
  const ImplicitKronecker k({DenseMatrix(3, 2), oracles::random_matrix(rng, 2, 2)});
  const std::size_t idx[2] = {0, 1};
  CHECK(k.factored_leverage_score(idx) == 0.0);
  CHECK(k.ridge_cross_score(idx, idx, 0.5) == 0.0);
  SplitMix64 draw_rng(1);
  CHECK_THROWS_AS(k.sample_row_index(draw_rng), std::invalid_argument);
}

TEST_CASE("kronecker row source feeds the sketch machinery") {
  SplitMix64 rng(515);
  std::vector<DenseMatrix> factors = {oracles::random_matrix(rng, 3, 2),
                                      oracles::random_matrix(rng, 2, 2)};
  const ImplicitKronecker k(factors);
  const KroneckerRowSource source(k);
  const DenseMatrix dense = k.materialize();
  REQUIRE(source.rows() == dense.rows());
  REQUIRE(source.cols() == dense.cols());
  std::vector<double> row(4);
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    source.copy_row(i, row);
    CHECK(oracles::max_abs_diff(
              row, std::vector<double>(dense.row(i).begin(), dense.row(i).end())) == 0.0);
  }
}
