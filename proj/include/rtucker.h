/* rtucker: regularized low-rank Tucker decomposition via ridge leverage-score
 * sampling, plus the underlying sketched ridge-regression and leverage-score
 * toolkit.
 *
 * C API over an opaque-handle core. Every function that can fail returns an
 * rtucker_status; rtucker_last_error() describes the most recent failure on
 * the calling thread. Handles are freed with their matching *_free function.
 */
#ifndef RTUCKER_H
#define RTUCKER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtucker_status {
  RTUCKER_OK = 0,
  RTUCKER_ERR_INVALID_ARGUMENT = 1,
  RTUCKER_ERR_IO = 2,
  RTUCKER_ERR_NUMERICAL = 3,
  RTUCKER_ERR_UNKNOWN = 4
} rtucker_status;

typedef struct rtucker_tensor rtucker_tensor;
typedef struct rtucker_model rtucker_model;
typedef struct rtucker_als_result rtucker_als_result;

const char* rtucker_version(void);
const char* rtucker_last_error(void);

/* ---- tensors (DTEN1 binary format, CSV ingestion) ---- */

rtucker_status rtucker_tensor_create(const uint64_t* shape, uint32_t order,
                                     const double* data, rtucker_tensor** out);
rtucker_status rtucker_tensor_read(const char* path, rtucker_tensor** out);
rtucker_status rtucker_tensor_read_csv(const char* path, rtucker_tensor** out);
rtucker_status rtucker_tensor_write(const rtucker_tensor* t, const char* path);
uint32_t rtucker_tensor_order(const rtucker_tensor* t);
rtucker_status rtucker_tensor_shape(const rtucker_tensor* t, uint64_t* shape_out);
uint64_t rtucker_tensor_size(const rtucker_tensor* t);
const double* rtucker_tensor_data(const rtucker_tensor* t);
void rtucker_tensor_free(rtucker_tensor* t);

/* Synthetic benchmark instance: random Tucker model with uniform [0,1)
 * entries, Gaussian noise added to noise_fraction of the entries. The
 * checksum identifies the planted model for sidecar metadata. */
rtucker_status rtucker_tensor_generate(const uint64_t* shape,
                                       const uint64_t* planted_ranks, uint32_t order,
                                       double noise_fraction, double noise_sigma,
                                       uint64_t seed, rtucker_tensor** out,
                                       uint64_t* planted_checksum_out);

/* ---- alternating least squares ---- */

typedef struct rtucker_als_options {
  double lambda;
  int sketched_core;  /* 0: exact core update, 1: leverage-score sketched */
  double epsilon;
  double delta;
  uint64_t seed;
  uint32_t max_iterations;
  double tolerance;               /* relative loss-change stopping rule */
  uint64_t sample_count_override; /* 0: use the formula count */
  int record_history;             /* 1: loss/rmse after every step */
} rtucker_als_options;

void rtucker_als_options_init(rtucker_als_options* opts);

rtucker_status rtucker_als_run(const rtucker_tensor* x, const uint64_t* ranks,
                               uint32_t order, const rtucker_als_options* opts,
                               rtucker_als_result** out);

uint64_t rtucker_result_history_size(const rtucker_als_result* r);
rtucker_status rtucker_result_history_row(const rtucker_als_result* r, uint64_t i,
                                          uint32_t* iteration, char* step_buf,
                                          size_t step_buf_len, double* loss,
                                          double* rmse);
uint64_t rtucker_result_timing_size(const rtucker_als_result* r);
rtucker_status rtucker_result_timing_row(const rtucker_als_result* r, uint64_t i,
                                         char* step_buf, size_t step_buf_len,
                                         double* mean_seconds, uint64_t* count);
double rtucker_result_final_loss(const rtucker_als_result* r);
double rtucker_result_final_rmse(const rtucker_als_result* r);
uint32_t rtucker_result_iterations(const rtucker_als_result* r);
rtucker_status rtucker_result_model(const rtucker_als_result* r, rtucker_model** out);
void rtucker_result_free(rtucker_als_result* r);

/* ---- models (RTKM1 binary format) ---- */

rtucker_status rtucker_model_write(const rtucker_model* m, const char* path);
rtucker_status rtucker_model_read(const char* path, rtucker_model** out);
rtucker_status rtucker_model_reconstruct(const rtucker_model* m, rtucker_tensor** out);
double rtucker_model_lambda(const rtucker_model* m);
uint32_t rtucker_model_order(const rtucker_model* m);
rtucker_status rtucker_model_ranks(const rtucker_model* m, uint64_t* ranks_out);
void rtucker_model_free(rtucker_model* m);

/* ---- ridge regression and leverage-score toolkit ---- */

/* Exact solve of min ||A x - b||^2 + lambda ||x||^2 for row-major A (n x d). */
rtucker_status rtucker_solve_ridge(const double* a, uint64_t n, uint64_t d,
                                   const double* b, double lambda, double* x_out);

/* lambda-ridge leverage scores of the rows of A; scores_out has length n. */
rtucker_status rtucker_ridge_scores(const double* a, uint64_t n, uint64_t d,
                                    double lambda, double* scores_out);

/* Sketched ridge regression by augmented leverage-score sampling. Pass
 * candidate_scores = NULL to use the classical leverage scores of A. With
 * probability >= 1 - delta the result is a (1 + epsilon)-approximation.
 * sample_count_override = 0 uses the formula count. */
rtucker_status rtucker_sketched_ridge(const double* a, uint64_t n, uint64_t d,
                                      const double* b,
                                      const double* candidate_scores, double lambda,
                                      double d_eff_lower, double epsilon,
                                      double delta, uint64_t sample_count_override,
                                      uint64_t seed, double* x_out,
                                      uint64_t* sample_count_out,
                                      double* beta_prime_out);

/* ---- verification suites ---- */

/* Runs one property suite ("leverage", "kronecker", "missing", "structural")
 * or "all". Writes 1/0 into passed_out and, if json_report_out is non-NULL, a
 * heap-allocated JSON report to free with rtucker_string_free. */
rtucker_status rtucker_verify_suite(const char* name, uint64_t seed,
                                    int* passed_out, char** json_report_out);
void rtucker_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RTUCKER_H */
