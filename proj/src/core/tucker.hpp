#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dense_matrix.hpp"
#include "kronecker.hpp"
#include "sketch_ridge.hpp"
#include "tensor.hpp"

namespace rtucker {

// Core tensor + factor matrices + the shared regularization strength. Factor
// n has shape I_n x R_n where (R_1, ..., R_N) is the core's shape.
struct TuckerModel {
  DenseTensor core;
  std::vector<DenseMatrix> factors;
  double lambda = 0.0;

  std::size_t order() const { return factors.size(); }
};

enum class CoreUpdate { Exact, Sketched };

struct AlsConfig {
  std::size_t max_iterations = 50;
  double convergence_tol = 1e-6;  // relative loss change
  double lambda = 0.0;            // shared across the core and every factor
  CoreUpdate core_update = CoreUpdate::Exact;
  SketchConfig sketch;  // epsilon/delta/override for the sketched core path
  std::uint64_t seed = 0;
  bool record_history = false;  // loss/rmse after every step, not just per iteration
};

struct HistoryRow {
  std::size_t iteration = 0;
  std::string step;  // "F1".."FN" or "Core"
  double loss = 0.0;
  double rmse = 0.0;
};

struct StepTiming {
  std::string step;
  double total_seconds = 0.0;
  std::size_t count = 0;

  double mean_seconds() const {
    return count == 0 ? 0.0 : total_seconds / static_cast<double>(count);
  }
};

struct AlsResult {
  TuckerModel model;
  std::vector<HistoryRow> history;
  std::vector<StepTiming> timings;
  std::size_t iterations_run = 0;
  double final_loss = 0.0;
  double final_rmse = 0.0;
  bool converged = false;
};

DenseTensor reconstruct(const TuckerModel& model);

// ||X - G x_1 A1 ... x_N AN||_F^2 + lambda (||G||_F^2 + sum ||A^(n)||_F^2).
double tucker_loss(const TuckerModel& model, const DenseTensor& x);

// Solves the I_n row-wise ridge problems min_y ||y K - b_i||^2 + lambda ||y||^2
// sharing one factorization of (K K^T + lambda I), where
// K = G_(n) (kron of the other factors)^T. Returns the updated factor.
DenseMatrix update_factor(const TuckerModel& model, const DenseTensor& x,
                          std::size_t mode);

// Exact regularized core update. Never materializes the Kronecker design:
// works in the factor SVD bases, where the regularized normal equations
// diagonalize.
DenseTensor update_core_exact(const TuckerModel& model, const DenseTensor& x);

// Oracle route: materializes the Kronecker design and calls the exact ridge
// solver. Only sensible for small tensors.
DenseTensor update_core_exact_materialized(const TuckerModel& model, const DenseTensor& x);

struct FastCoreResult {
  DenseTensor core;
  SketchDiagnostics diagnostics;
  double setup_seconds = 0.0;  // factor SVDs / scores / CDFs
};

// Sketched core update: samples from the augmented product leverage-score
// distribution of K = A1 (x) ... (x) AN and solves the sketched system. Space
// stays O(prod R_n^2 + sum I_n R_n) beyond the input tensor itself.
FastCoreResult update_core_fast(const TuckerModel& model, const DenseTensor& x,
                                const SketchConfig& config);

AlsResult als(const DenseTensor& x, const std::vector<std::size_t>& ranks,
              const AlsConfig& config);

// Random model with i.i.d. uniform [0, 1) entries; the standard initializer.
TuckerModel random_model(const std::vector<std::size_t>& shape,
                         const std::vector<std::size_t>& ranks, double lambda,
                         SplitMix64& rng);

}  // namespace rtucker
