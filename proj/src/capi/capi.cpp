#include "rtucker.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"

#include "../core/leverage.hpp"
#include "../core/linalg.hpp"
#include "../core/model_io.hpp"
#include "../core/sketch_ridge.hpp"
#include "../core/synthetic.hpp"
#include "../core/tensor.hpp"
#include "../core/tensor_io.hpp"
#include "../core/tucker.hpp"
#include "../core/verify.hpp"

struct rtucker_tensor {
  rtucker::DenseTensor tensor;
};

struct rtucker_model {
  rtucker::TuckerModel model;
};

struct rtucker_als_result {
  rtucker::AlsResult result;
};

namespace {

thread_local std::string g_last_error;

rtucker_status fail(rtucker_status code, const char* message) {
  g_last_error = message;
  return code;
}

// Runs `fn` and maps C++ errors onto status codes; contract violations become
// INVALID_ARGUMENT, convergence failures NUMERICAL, filesystem problems IO.
template <typename Fn>
rtucker_status guarded(Fn&& fn) {
  try {
    fn();
    return RTUCKER_OK;
  } catch (const std::invalid_argument& e) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, e.what());
  } catch (const rtucker::NumericalError& e) {
    return fail(RTUCKER_ERR_NUMERICAL, e.what());
  } catch (const std::runtime_error& e) {
    return fail(RTUCKER_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RTUCKER_ERR_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return fail(RTUCKER_ERR_UNKNOWN, e.what());
  }
}

std::vector<std::size_t> to_shape(const uint64_t* values, uint32_t order) {
  return {values, values + order};
}

rtucker_status copy_step_label(const std::string& label, char* buf, size_t len) {
  if (buf == nullptr || len == 0 || label.size() + 1 > len) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "step buffer too small");
  }
  std::memcpy(buf, label.c_str(), label.size() + 1);
  return RTUCKER_OK;
}

}  // namespace

extern "C" {

const char* rtucker_version(void) { return "1.0.0"; }

const char* rtucker_last_error(void) { return g_last_error.c_str(); }

rtucker_status rtucker_tensor_create(const uint64_t* shape, uint32_t order,
                                     const double* data, rtucker_tensor** out) {
  if (shape == nullptr || data == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto dims = to_shape(shape, order);
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    *out = new rtucker_tensor{
        rtucker::DenseTensor(dims, std::vector<double>(data, data + total))};
  });
}

rtucker_status rtucker_tensor_read(const char* path, rtucker_tensor** out) {
  if (path == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *out = new rtucker_tensor{rtucker::read_tensor(path)}; });
}

rtucker_status rtucker_tensor_read_csv(const char* path, rtucker_tensor** out) {
  if (path == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *out = new rtucker_tensor{rtucker::read_tensor_csv(path)}; });
}

rtucker_status rtucker_tensor_write(const rtucker_tensor* t, const char* path) {
  if (t == nullptr || path == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { rtucker::write_tensor(t->tensor, path); });
}

uint32_t rtucker_tensor_order(const rtucker_tensor* t) {
  return t == nullptr ? 0 : static_cast<uint32_t>(t->tensor.order());
}

rtucker_status rtucker_tensor_shape(const rtucker_tensor* t, uint64_t* shape_out) {
  if (t == nullptr || shape_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  for (std::size_t n = 0; n < t->tensor.order(); ++n) {
    shape_out[n] = t->tensor.dim(n);
  }
  return RTUCKER_OK;
}

uint64_t rtucker_tensor_size(const rtucker_tensor* t) {
  return t == nullptr ? 0 : t->tensor.size();
}

const double* rtucker_tensor_data(const rtucker_tensor* t) {
  return t == nullptr ? nullptr : t->tensor.data();
}

void rtucker_tensor_free(rtucker_tensor* t) { delete t; }

rtucker_status rtucker_tensor_generate(const uint64_t* shape,
                                       const uint64_t* planted_ranks, uint32_t order,
                                       double noise_fraction, double noise_sigma,
                                       uint64_t seed, rtucker_tensor** out,
                                       uint64_t* planted_checksum_out) {
  if (shape == nullptr || planted_ranks == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    rtucker::SyntheticSpec spec;
    spec.shape = to_shape(shape, order);
    spec.planted_ranks = to_shape(planted_ranks, order);
    spec.noise_fraction = noise_fraction;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    rtucker::SyntheticInstance instance = rtucker::generate_synthetic(spec);
    if (planted_checksum_out != nullptr) {
      *planted_checksum_out = instance.planted_checksum;
    }
    *out = new rtucker_tensor{std::move(instance.tensor)};
  });
}

void rtucker_als_options_init(rtucker_als_options* opts) {
  if (opts == nullptr) return;
  opts->lambda = 0.001;
  opts->sketched_core = 0;
  opts->epsilon = 0.1;
  opts->delta = 0.1;
  opts->seed = 0;
  opts->max_iterations = 50;
  opts->tolerance = 1e-6;
  opts->sample_count_override = 0;
  opts->record_history = 0;
}

rtucker_status rtucker_als_run(const rtucker_tensor* x, const uint64_t* ranks,
                               uint32_t order, const rtucker_als_options* opts,
                               rtucker_als_result** out) {
  if (x == nullptr || ranks == nullptr || opts == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    rtucker::AlsConfig config;
    config.max_iterations = opts->max_iterations;
    config.convergence_tol = opts->tolerance;
    config.lambda = opts->lambda;
    config.core_update = opts->sketched_core != 0 ? rtucker::CoreUpdate::Sketched
                                                  : rtucker::CoreUpdate::Exact;
    config.sketch.epsilon = opts->epsilon;
    config.sketch.delta = opts->delta;
    config.sketch.lambda = opts->lambda;
    if (opts->sample_count_override != 0) {
      config.sketch.sample_count_override =
          static_cast<std::size_t>(opts->sample_count_override);
    }
    config.seed = opts->seed;
    config.record_history = opts->record_history != 0;
    *out = new rtucker_als_result{
        rtucker::als(x->tensor, to_shape(ranks, order), config)};
  });
}

uint64_t rtucker_result_history_size(const rtucker_als_result* r) {
  return r == nullptr ? 0 : r->result.history.size();
}

rtucker_status rtucker_result_history_row(const rtucker_als_result* r, uint64_t i,
                                          uint32_t* iteration, char* step_buf,
                                          size_t step_buf_len, double* loss,
                                          double* rmse) {
  if (r == nullptr || i >= r->result.history.size()) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "history row out of range");
  }
  const rtucker::HistoryRow& row = r->result.history[i];
  if (iteration != nullptr) *iteration = static_cast<uint32_t>(row.iteration);
  if (loss != nullptr) *loss = row.loss;
  if (rmse != nullptr) *rmse = row.rmse;
  return copy_step_label(row.step, step_buf, step_buf_len);
}

uint64_t rtucker_result_timing_size(const rtucker_als_result* r) {
  return r == nullptr ? 0 : r->result.timings.size();
}

rtucker_status rtucker_result_timing_row(const rtucker_als_result* r, uint64_t i,
                                         char* step_buf, size_t step_buf_len,
                                         double* mean_seconds, uint64_t* count) {
  if (r == nullptr || i >= r->result.timings.size()) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "timing row out of range");
  }
  const rtucker::StepTiming& t = r->result.timings[i];
  if (mean_seconds != nullptr) *mean_seconds = t.mean_seconds();
  if (count != nullptr) *count = t.count;
  return copy_step_label(t.step, step_buf, step_buf_len);
}

double rtucker_result_final_loss(const rtucker_als_result* r) {
  return r == nullptr ? 0.0 : r->result.final_loss;
}

double rtucker_result_final_rmse(const rtucker_als_result* r) {
  return r == nullptr ? 0.0 : r->result.final_rmse;
}

uint32_t rtucker_result_iterations(const rtucker_als_result* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->result.iterations_run);
}

rtucker_status rtucker_result_model(const rtucker_als_result* r, rtucker_model** out) {
  if (r == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *out = new rtucker_model{r->result.model}; });
}

void rtucker_result_free(rtucker_als_result* r) { delete r; }

rtucker_status rtucker_model_write(const rtucker_model* m, const char* path) {
  if (m == nullptr || path == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { rtucker::write_model(m->model, path); });
}

rtucker_status rtucker_model_read(const char* path, rtucker_model** out) {
  if (path == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *out = new rtucker_model{rtucker::read_model(path)}; });
}

rtucker_status rtucker_model_reconstruct(const rtucker_model* m, rtucker_tensor** out) {
  if (m == nullptr || out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *out = new rtucker_tensor{rtucker::reconstruct(m->model)}; });
}

double rtucker_model_lambda(const rtucker_model* m) {
  return m == nullptr ? 0.0 : m->model.lambda;
}

uint32_t rtucker_model_order(const rtucker_model* m) {
  return m == nullptr ? 0 : static_cast<uint32_t>(m->model.order());
}

rtucker_status rtucker_model_ranks(const rtucker_model* m, uint64_t* ranks_out) {
  if (m == nullptr || ranks_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  for (std::size_t n = 0; n < m->model.order(); ++n) {
    ranks_out[n] = m->model.core.dim(n);
  }
  return RTUCKER_OK;
}

void rtucker_model_free(rtucker_model* m) { delete m; }

rtucker_status rtucker_solve_ridge(const double* a, uint64_t n, uint64_t d,
                                   const double* b, double lambda, double* x_out) {
  if (a == nullptr || b == nullptr || x_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const rtucker::DenseMatrix design(n, d, std::vector<double>(a, a + n * d));
    const std::vector<double> x =
        rtucker::solve_ridge_exact(design, {b, b + n}, lambda);
    std::memcpy(x_out, x.data(), x.size() * sizeof(double));
  });
}

rtucker_status rtucker_ridge_scores(const double* a, uint64_t n, uint64_t d,
                                    double lambda, double* scores_out) {
  if (a == nullptr || scores_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const rtucker::DenseMatrix design(n, d, std::vector<double>(a, a + n * d));
    const rtucker::ScoreVector scores = rtucker::ridge_scores(design, lambda);
    std::memcpy(scores_out, scores.scores.data(), scores.size() * sizeof(double));
  });
}

rtucker_status rtucker_sketched_ridge(const double* a, uint64_t n, uint64_t d,
                                      const double* b,
                                      const double* candidate_scores, double lambda,
                                      double d_eff_lower, double epsilon,
                                      double delta, uint64_t sample_count_override,
                                      uint64_t seed, double* x_out,
                                      uint64_t* sample_count_out,
                                      double* beta_prime_out) {
  if (a == nullptr || b == nullptr || x_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const rtucker::DenseMatrix design(n, d, std::vector<double>(a, a + n * d));
    rtucker::ScoreVector candidate;
    candidate.lambda = lambda;
    if (candidate_scores != nullptr) {
      candidate.scores.assign(candidate_scores, candidate_scores + n);
    } else {
      candidate = rtucker::classical_scores(design);
    }
    rtucker::SketchConfig config;
    config.epsilon = epsilon;
    config.delta = delta;
    config.lambda = lambda;
    config.seed = seed;
    if (sample_count_override != 0) {
      config.sample_count_override = static_cast<std::size_t>(sample_count_override);
    }
    const rtucker::SketchedSolution solution = rtucker::approximate_ridge_regression(
        design, {b, b + n}, candidate, d_eff_lower, config);
    std::memcpy(x_out, solution.x.data(), solution.x.size() * sizeof(double));
    if (sample_count_out != nullptr) {
      *sample_count_out = solution.diagnostics.sample_count;
    }
    if (beta_prime_out != nullptr) {
      *beta_prime_out = solution.diagnostics.beta_prime;
    }
  });
}

rtucker_status rtucker_verify_suite(const char* name, uint64_t seed,
                                    int* passed_out, char** json_report_out) {
  if (name == nullptr || passed_out == nullptr) {
    return fail(RTUCKER_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::vector<rtucker::verify::SuiteResult> results;
    if (std::string(name) == "all") {
      for (const std::string& suite : rtucker::verify::suite_names()) {
        results.push_back(rtucker::verify::run_suite(suite, seed));
      }
    } else {
      results.push_back(rtucker::verify::run_suite(name, seed));
    }

    bool all_passed = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& suite : results) {
      all_passed = all_passed && suite.passed;
      nlohmann::json checks = nlohmann::json::array();
      for (const auto& check : suite.checks) {
        checks.push_back({{"name", check.name},
                          {"passed", check.passed},
                          {"observed", check.observed},
                          {"bound", check.bound}});
      }
      report.push_back({{"suite", suite.suite},
                        {"passed", suite.passed},
                        {"elapsed_seconds", suite.elapsed_seconds},
                        {"checks", checks}});
    }
    *passed_out = all_passed ? 1 : 0;
    if (json_report_out != nullptr) {
      const std::string serialized = report.dump(2);
      char* buffer = new char[serialized.size() + 1];
      std::memcpy(buffer, serialized.c_str(), serialized.size() + 1);
      *json_report_out = buffer;
    }
  });
}

void rtucker_string_free(char* s) { delete[] s; }

}  // extern "C"
