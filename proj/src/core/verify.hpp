#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rtucker::verify {

struct Check {
  std::string name;
  bool passed = false;
  double observed = 0.0;  // worst value seen across trials
  double bound = 0.0;     // what it was required to stay within
};

struct SuiteResult {
  std::string suite;
  bool passed = false;
  std::vector<Check> checks;
  double elapsed_seconds = 0.0;
};

// Property suites runnable independently (library-side so the CLI and the
// acceptance harness share one implementation):
//   leverage   - score formula agreement, effective dimension, augmented-design
//                equality, score ordering, cross-score sum rule
//   kronecker  - factored scores and ridge cross scores vs. materialized
//                matrices, cross-score eigenvalue formula
//   missing    - row-removal update vs. recomputation, upper-bound dominance
//   structural - subspace-embedding and matrix-multiplication Monte Carlo
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, std::uint64_t seed);

SuiteResult leverage_suite(std::uint64_t seed, std::size_t trials = 200);
SuiteResult kronecker_suite(std::uint64_t seed, std::size_t trials = 50);
SuiteResult missing_suite(std::uint64_t seed, std::size_t trials = 100);
SuiteResult structural_suite(std::uint64_t seed, std::size_t embedding_trials = 200,
                             std::size_t product_sketches = 10000);

}  // namespace rtucker::verify
