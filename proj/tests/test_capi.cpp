#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "rtucker.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("tensor create, write, read round trip") {
  const uint64_t shape[3] = {2, 3, 2};
  std::vector<double> data(12);
  for (std::size_t i = 0; i < 12; ++i) data[i] = 0.5 * static_cast<double>(i);

  rtucker_tensor* t = nullptr;
  REQUIRE(rtucker_tensor_create(shape, 3, data.data(), &t) == RTUCKER_OK);
  CHECK(rtucker_tensor_order(t) == 3);
  CHECK(rtucker_tensor_size(t) == 12);
  uint64_t shape_out[3] = {0, 0, 0};
  REQUIRE(rtucker_tensor_shape(t, shape_out) == RTUCKER_OK);
  CHECK(shape_out[1] == 3);

  const std::string path = temp_path("capi_tensor.dten");
  REQUIRE(rtucker_tensor_write(t, path.c_str()) == RTUCKER_OK);
  rtucker_tensor* back = nullptr;
  REQUIRE(rtucker_tensor_read(path.c_str(), &back) == RTUCKER_OK);
  CHECK(std::memcmp(rtucker_tensor_data(back), data.data(), 12 * sizeof(double)) == 0);
  rtucker_tensor_free(t);
  rtucker_tensor_free(back);
  std::filesystem::remove(path);
}

TEST_CASE("error paths set codes and messages") {
  CHECK(rtucker_tensor_read("/nonexistent/path.dten", nullptr) ==
        RTUCKER_ERR_INVALID_ARGUMENT);
  rtucker_tensor* t = nullptr;
  CHECK(rtucker_tensor_read("/nonexistent/path.dten", &t) == RTUCKER_ERR_IO);
  CHECK(std::strlen(rtucker_last_error()) > 0);

  const uint64_t bad_shape[2] = {2, 0};
  const double data[1] = {0.0};
  CHECK(rtucker_tensor_create(bad_shape, 2, data, &t) == RTUCKER_ERR_INVALID_ARGUMENT);
}

TEST_CASE("synthetic generation is deterministic and checksummed") {
  const uint64_t shape[3] = {8, 8, 8};
  const uint64_t planted[3] = {3, 3, 3};
  rtucker_tensor* a = nullptr;
  rtucker_tensor* b = nullptr;
  uint64_t sum_a = 0, sum_b = 0;
  REQUIRE(rtucker_tensor_generate(shape, planted, 3, 0.01, 1.0, 99, &a, &sum_a) ==
          RTUCKER_OK);
  REQUIRE(rtucker_tensor_generate(shape, planted, 3, 0.01, 1.0, 99, &b, &sum_b) ==
          RTUCKER_OK);
  CHECK(sum_a == sum_b);
  CHECK(std::memcmp(rtucker_tensor_data(a), rtucker_tensor_data(b),
                    512 * sizeof(double)) == 0);
  rtucker_tensor_free(a);
  rtucker_tensor_free(b);

  // Invalid noise fraction is rejected.
  CHECK(rtucker_tensor_generate(shape, planted, 3, 1.5, 1.0, 1, &a, nullptr) ==
        RTUCKER_ERR_INVALID_ARGUMENT);
}

TEST_CASE("noise-free generation reconstructs the planted model exactly") {
  const uint64_t shape[2] = {6, 5};
  const uint64_t planted[2] = {2, 2};
  rtucker_tensor* t = nullptr;
  REQUIRE(rtucker_tensor_generate(shape, planted, 2, 0.0, 1.0, 4, &t, nullptr) ==
          RTUCKER_OK);
  // All entries finite and the tensor is rank-(2,2): verified through ALS
  // reaching zero loss below.
  rtucker_als_options opts;
  rtucker_als_options_init(&opts);
  opts.lambda = 0.0;
  opts.max_iterations = 30;
  opts.tolerance = 0.0;
  opts.seed = 11;
  const uint64_t ranks[2] = {2, 2};
  rtucker_als_result* result = nullptr;
  REQUIRE(rtucker_als_run(t, ranks, 2, &opts, &result) == RTUCKER_OK);
  CHECK(rtucker_result_final_rmse(result) < 1e-6);
  rtucker_result_free(result);
  rtucker_tensor_free(t);
}

TEST_CASE("als run exposes history, timings, and the model") {
  const uint64_t shape[3] = {6, 5, 4};
  const uint64_t planted[3] = {2, 2, 2};
  rtucker_tensor* t = nullptr;
  REQUIRE(rtucker_tensor_generate(shape, planted, 3, 0.0, 1.0, 21, &t, nullptr) ==
          RTUCKER_OK);

  rtucker_als_options opts;
  rtucker_als_options_init(&opts);
  opts.max_iterations = 3;
  opts.record_history = 1;
  opts.tolerance = 0.0;
  const uint64_t ranks[3] = {2, 2, 2};
  rtucker_als_result* result = nullptr;
  REQUIRE(rtucker_als_run(t, ranks, 3, &opts, &result) == RTUCKER_OK);
  CHECK(rtucker_result_iterations(result) == 3);
  CHECK(rtucker_result_history_size(result) == 12);  // 4 steps x 3 iterations

  char step[16];
  uint32_t iteration = 0;
  double loss = 0.0, rmse = 0.0;
  REQUIRE(rtucker_result_history_row(result, 0, &iteration, step, sizeof(step), &loss,
                                     &rmse) == RTUCKER_OK);
  CHECK(iteration == 1);
  CHECK(std::string(step) == "F1");
  CHECK(loss >= 0.0);

  REQUIRE(rtucker_result_timing_size(result) == 4);
  uint64_t count = 0;
  double mean = 0.0;
  REQUIRE(rtucker_result_timing_row(result, 3, step, sizeof(step), &mean, &count) ==
          RTUCKER_OK);
  CHECK(std::string(step) == "Core");
  CHECK(count == 3);

  // Buffer too small is an error, not a truncation.
  CHECK(rtucker_result_history_row(result, 0, nullptr, step, 2, nullptr, nullptr) ==
        RTUCKER_ERR_INVALID_ARGUMENT);

  rtucker_model* model = nullptr;
  REQUIRE(rtucker_result_model(result, &model) == RTUCKER_OK);
  CHECK(rtucker_model_order(model) == 3);
  uint64_t model_ranks[3];
  REQUIRE(rtucker_model_ranks(model, model_ranks) == RTUCKER_OK);
  CHECK(model_ranks[0] == 2);

  const std::string path = temp_path("capi_model.rtkm");
  REQUIRE(rtucker_model_write(model, path.c_str()) == RTUCKER_OK);
  rtucker_model* loaded = nullptr;
  REQUIRE(rtucker_model_read(path.c_str(), &loaded) == RTUCKER_OK);
  CHECK(rtucker_model_lambda(loaded) == rtucker_model_lambda(model));

  rtucker_tensor* reconstructed = nullptr;
  REQUIRE(rtucker_model_reconstruct(loaded, &reconstructed) == RTUCKER_OK);
  CHECK(rtucker_tensor_size(reconstructed) == 120);

  rtucker_tensor_free(reconstructed);
  rtucker_model_free(model);
  rtucker_model_free(loaded);
  rtucker_result_free(result);
  rtucker_tensor_free(t);
  std::filesystem::remove(path);
}

TEST_CASE("als rejects invalid rank requests") {
  const uint64_t shape[2] = {4, 4};
  const uint64_t planted[2] = {2, 2};
  rtucker_tensor* t = nullptr;
  REQUIRE(rtucker_tensor_generate(shape, planted, 2, 0.0, 1.0, 3, &t, nullptr) ==
          RTUCKER_OK);
  rtucker_als_options opts;
  rtucker_als_options_init(&opts);
  const uint64_t ranks[2] = {5, 2};
  rtucker_als_result* result = nullptr;
  CHECK(rtucker_als_run(t, ranks, 2, &opts, &result) == RTUCKER_ERR_INVALID_ARGUMENT);
  rtucker_tensor_free(t);
}

TEST_CASE("ridge toolkit: exact solve, scores, sketched solve") {
  // 4 x 2 system with known structure.
  const std::vector<double> a = {1.0, 0.0, 0.0, 1.0, 1.0, 1.0, -1.0, 1.0};
  const std::vector<double> b = {1.0, 2.0, 3.0, 0.0};

  double x[2] = {0, 0};
  REQUIRE(rtucker_solve_ridge(a.data(), 4, 2, b.data(), 0.0, x) == RTUCKER_OK);
  // Normal equations: A^T A = [[3, 0], [0, 3]], A^T b = (4, 5)... verify by
  // residual orthogonality instead of hand values.
  double atr[2] = {0, 0};
  for (std::size_t i = 0; i < 4; ++i) {
    const double r = a[2 * i] * x[0] + a[2 * i + 1] * x[1] - b[i];
    atr[0] += a[2 * i] * r;
    atr[1] += a[2 * i + 1] * r;
  }
  CHECK(std::abs(atr[0]) < 1e-9);
  CHECK(std::abs(atr[1]) < 1e-9);

  double scores[4];
  REQUIRE(rtucker_ridge_scores(a.data(), 4, 2, 0.5, scores) == RTUCKER_OK);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(scores[i] > 0.0);
    CHECK(scores[i] < 1.0);
  }

  double xs[2] = {0, 0};
  uint64_t s = 0;
  double beta_prime = 0.0;
  REQUIRE(rtucker_sketched_ridge(a.data(), 4, 2, b.data(), nullptr, 0.1, 0.0, 0.25,
                                 0.2, 4000, 17, xs, &s, &beta_prime) == RTUCKER_OK);
  CHECK(s == 4000);
  CHECK(beta_prime == doctest::Approx(0.5));
  double exact[2];
  REQUIRE(rtucker_solve_ridge(a.data(), 4, 2, b.data(), 0.1, exact) == RTUCKER_OK);
  // Oversampled sketch of a tiny system lands very close to the exact answer.
  CHECK(std::abs(xs[0] - exact[0]) < 0.2);
  CHECK(std::abs(xs[1] - exact[1]) < 0.2);
}

TEST_CASE("verify suites run through the C API") {
  int passed = -1;
  char* report = nullptr;
  REQUIRE(rtucker_verify_suite("leverage", 7, &passed, &report) == RTUCKER_OK);
  CHECK(passed == 1);
  REQUIRE(report != nullptr);
  CHECK(std::strstr(report, "svd_form_vs_pinv_form") != nullptr);
  rtucker_string_free(report);

  CHECK(rtucker_verify_suite("nope", 7, &passed, nullptr) ==
        RTUCKER_ERR_INVALID_ARGUMENT);
  CHECK(rtucker_version() != nullptr);
}
