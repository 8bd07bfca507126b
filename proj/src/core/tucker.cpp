#include "tucker.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "linalg.hpp"

namespace rtucker {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_shapes(const TuckerModel& model, const DenseTensor& x) {
  if (model.order() != x.order() || model.core.order() != x.order()) {
    throw std::invalid_argument("tucker: model order != tensor order");
  }
  for (std::size_t n = 0; n < model.order(); ++n) {
    if (model.factors[n].rows() != x.dim(n) ||
        model.factors[n].cols() != model.core.dim(n)) {
      throw std::invalid_argument("tucker: factor/core/tensor shape mismatch");
    }
  }
}

// Kronecker product of all factors except `skip` (0-based), in increasing
// mode order.
DenseMatrix kron_excluding(const std::vector<DenseMatrix>& factors, std::size_t skip) {
  DenseMatrix out;
  bool first = true;
  for (std::size_t n = 0; n < factors.size(); ++n) {
    if (n == skip) continue;
    out = first ? factors[n] : kronecker_product(out, factors[n]);
    first = false;
  }
  if (first) {
    out = DenseMatrix::identity(1);
  }
  return out;
}

}  // namespace

DenseTensor reconstruct(const TuckerModel& model) {
  DenseTensor out = model.core;
  for (std::size_t n = 0; n < model.order(); ++n) {
    out = mode_n_product(out, model.factors[n], n + 1);
  }
  return out;
}

double tucker_loss(const TuckerModel& model, const DenseTensor& x) {
  check_shapes(model, x);
  const DenseTensor xhat = reconstruct(model);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - xhat[i];
    loss += r * r;
  }
  double reg = norm2_squared(model.core.values());
  for (const DenseMatrix& f : model.factors) {
    reg += norm2_squared({f.data(), f.size()});
  }
  return loss + model.lambda * reg;
}

DenseMatrix update_factor(const TuckerModel& model, const DenseTensor& x,
                          std::size_t mode) {
  check_shapes(model, x);
  if (mode < 1 || mode > model.order()) {
    throw std::invalid_argument("update_factor: mode out of range");
  }
  const std::size_t axis = mode - 1;
  // K = G_(n) (A^(1) (x) ... skip n ... (x) A^(N))^T, shape R_n x J.
  const DenseMatrix g_unf = unfold(model.core, mode);
  const DenseMatrix others = kron_excluding(model.factors, axis);
  const DenseMatrix k = matmul(g_unf, transpose(others));
  const DenseMatrix b = unfold(x, mode);  // I_n x J

  // All rows share (K K^T + lambda I); one factorization serves every row:
  //   A^(n) <- B K^T (K K^T + lambda I)^+.
  DenseMatrix gram_k = gram(transpose(k));
  for (std::size_t i = 0; i < gram_k.rows(); ++i) gram_k(i, i) += model.lambda;
  const DenseMatrix inv = pseudoinverse(gram_k);
  return matmul(matmul(b, transpose(k)), inv);
}

DenseTensor update_core_exact(const TuckerModel& model, const DenseTensor& x) {
  check_shapes(model, x);
  // In the factor SVD bases A^(n) = U^(n) S^(n) V^(n)T the normal equations
  // diagonalize: the solution is
  //   W = X x_n U^(n)T, W_t *= s_t / (s_t^2 + lambda), G = W x_n V^(n),
  // with s_t the product of per-factor singular values over the rank tuple t.
  const std::size_t order = model.order();
  std::vector<CompactSvd> svds;
  svds.reserve(order);
  for (const DenseMatrix& f : model.factors) svds.push_back(compact_svd(f));
  for (const CompactSvd& svd : svds) {
    if (svd.rank() == 0) {
      // A zero factor annihilates the design matrix; the minimizer is the
      // zero core.
      return DenseTensor(model.core.shape());
    }
  }

  DenseTensor w = x;
  for (std::size_t n = 0; n < order; ++n) {
    w = mode_n_product(w, transpose(svds[n].u), n + 1);
  }

  std::vector<std::size_t> t(order, 0);
  for (std::size_t flat = 0; flat < w.size(); ++flat) {
    double sigma = 1.0;
    for (std::size_t n = 0; n < order; ++n) sigma *= svds[n].singular_values[t[n]];
    w[flat] *= sigma / (sigma * sigma + model.lambda);
    for (std::size_t n = order; n-- > 0;) {
      if (++t[n] < w.dim(n)) break;
      t[n] = 0;
    }
  }

  for (std::size_t n = 0; n < order; ++n) {
    w = mode_n_product(w, transpose(svds[n].vt), n + 1);
  }
  return w;
}

DenseTensor update_core_exact_materialized(const TuckerModel& model,
                                           const DenseTensor& x) {
  check_shapes(model, x);
  const ImplicitKronecker k(model.factors);
  const DenseMatrix dense_k = k.materialize();
  const std::vector<double> solution =
      solve_ridge_exact(dense_k, x.values(), model.lambda);
  return devectorize(solution, model.core.shape());
}

FastCoreResult update_core_fast(const TuckerModel& model, const DenseTensor& x,
                                const SketchConfig& config) {
  check_shapes(model, x);
  FastCoreResult out;

  auto t0 = std::chrono::steady_clock::now();
  const ImplicitKronecker k(model.factors);
  for (std::size_t n = 0; n < k.factor_count(); ++n) {
    if (k.factor_svd(n).rank() == 0) {
      out.core = DenseTensor(model.core.shape());
      out.setup_seconds = seconds_since(t0);
      return out;
    }
  }
  const ProductLeverageSampler sampler(k, /*d_eff_lower=*/0.0);
  out.setup_seconds = seconds_since(t0);

  const KroneckerRowSource source(k);
  SketchConfig cfg = config;
  cfg.lambda = model.lambda;
  SketchedSolution solution =
      solve_sketched_ridge(source, x.values(), sampler, model.lambda, cfg);
  out.diagnostics = solution.diagnostics;
  out.core = devectorize(std::move(solution.x), model.core.shape());
  return out;
}

TuckerModel random_model(const std::vector<std::size_t>& shape,
                         const std::vector<std::size_t>& ranks, double lambda,
                         SplitMix64& rng) {
  if (shape.size() != ranks.size()) {
    throw std::invalid_argument("random_model: shape/ranks order mismatch");
  }
  TuckerModel model;
  model.lambda = lambda;
  model.core = DenseTensor(std::vector<std::size_t>(ranks));
  for (std::size_t i = 0; i < model.core.size(); ++i) {
    model.core[i] = rng.next_double();
  }
  model.factors.reserve(shape.size());
  for (std::size_t n = 0; n < shape.size(); ++n) {
    if (ranks[n] == 0 || ranks[n] > shape[n]) {
      throw std::invalid_argument("random_model: rank outside [1, I_n]");
    }
    DenseMatrix f(shape[n], ranks[n]);
    for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = rng.next_double();
    model.factors.push_back(std::move(f));
  }
  return model;
}

AlsResult als(const DenseTensor& x, const std::vector<std::size_t>& ranks,
              const AlsConfig& config) {
  if (config.max_iterations == 0) {
    throw std::invalid_argument("als: max_iterations must be >= 1");
  }
  if (ranks.size() != x.order()) {
    throw std::invalid_argument("als: ranks order != tensor order");
  }

  SplitMix64 init_rng(config.seed);
  AlsResult result;
  result.model = random_model(x.shape(), ranks, config.lambda, init_rng);
  // Sketch seeds come from an independent stream so that exact and sketched
  // runs share the same initial model for a given seed.
  SplitMix64 sketch_seed_rng = SplitMix64(config.seed).split();

  const std::size_t order = x.order();
  result.timings.resize(order + 1);
  for (std::size_t n = 0; n < order; ++n) {
    result.timings[n].step = "F" + std::to_string(n + 1);
  }
  result.timings[order].step = "Core";

  // One reconstruction yields both the regularized loss and the fit RMSE.
  auto evaluate = [&](double& loss, double& fit_rmse) {
    const DenseTensor xhat = reconstruct(result.model);
    double residual = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - xhat[i];
      residual += d * d;
    }
    double reg = norm2_squared(result.model.core.values());
    for (const DenseMatrix& f : result.model.factors) {
      reg += norm2_squared({f.data(), f.size()});
    }
    loss = residual + config.lambda * reg;
    fit_rmse = std::sqrt(residual / static_cast<double>(x.size()));
  };
  auto record = [&](std::size_t iteration, const std::string& step) {
    HistoryRow row;
    row.iteration = iteration;
    row.step = step;
    evaluate(row.loss, row.rmse);
    result.history.push_back(std::move(row));
    return result.history.back().loss;
  };

  double previous_loss, unused_rmse;
  evaluate(previous_loss, unused_rmse);
  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    for (std::size_t n = 0; n < order; ++n) {
      const auto t0 = std::chrono::steady_clock::now();
      result.model.factors[n] = update_factor(result.model, x, n + 1);
      result.timings[n].total_seconds += seconds_since(t0);
      result.timings[n].count += 1;
      if (config.record_history) record(iter, result.timings[n].step);
    }

    const auto t0 = std::chrono::steady_clock::now();
    if (config.core_update == CoreUpdate::Exact) {
      result.model.core = update_core_exact(result.model, x);
    } else {
      SketchConfig cfg = config.sketch;
      cfg.seed = sketch_seed_rng.next_u64();
      result.model.core = update_core_fast(result.model, x, cfg).core;
    }
    result.timings[order].total_seconds += seconds_since(t0);
    result.timings[order].count += 1;

    // History always carries at least per-iteration granularity.
    const double loss = record(iter, "Core");
    result.iterations_run = iter;
    const double change = std::abs(previous_loss - loss) /
                          std::max(std::abs(previous_loss), 1e-300);
    previous_loss = loss;
    if (change < config.convergence_tol) {
      result.converged = true;
      break;
    }
  }

  result.final_loss = result.history.back().loss;
  result.final_rmse = result.history.back().rmse;
  return result;
}

}  // namespace rtucker
