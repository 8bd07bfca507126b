// rtucker command-line front end: synthesize benchmark tensors, run exact or
// sketched Tucker decompositions, sweep benchmark grids, and run the property
// verification suites. Links the C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtucker.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int status_to_exit(rtucker_status status) {
  switch (status) {
    case RTUCKER_OK:
      return kExitOk;
    case RTUCKER_ERR_INVALID_ARGUMENT:
    case RTUCKER_ERR_IO:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

int report_failure(const char* what, rtucker_status status) {
  std::cerr << "error: " << what << ": " << rtucker_last_error() << "\n";
  return status_to_exit(status);
}

std::vector<uint64_t> parse_dims(const std::string& text) {
  std::vector<uint64_t> dims;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    dims.push_back(std::stoull(field));
  }
  return dims;
}

std::string dims_label(const std::vector<uint64_t>& dims) {
  std::string label;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i > 0) label += "x";
    label += std::to_string(dims[i]);
  }
  return label;
}

// Shapes at or beyond this footprint get a memory estimate printed before
// any allocation happens.
void warn_large_allocation(const std::vector<uint64_t>& shape) {
  double bytes = sizeof(double);
  for (uint64_t d : shape) bytes *= static_cast<double>(d);
  if (bytes >= 1024.0 * 1024.0 * 1024.0) {
    std::cerr << "note: tensor of shape " << dims_label(shape) << " needs about "
              << bytes / (1024.0 * 1024.0 * 1024.0) << " GiB\n";
  }
}

struct RunOptions {
  std::string input;
  std::string config_path;
  std::vector<uint64_t> shape;
  std::vector<uint64_t> ranks;
  std::vector<uint64_t> planted_ranks;
  double lambda = 0.001;
  double epsilon = 0.1;
  double delta = 0.1;
  double noise_fraction = 0.01;
  double noise_sigma = 1.0;
  std::string mode = "exact";
  uint64_t seed = 0;
  uint32_t max_iters = 50;
  double tol = 1e-6;
  uint64_t sample_override = 0;
  std::string out_dir = ".";
  bool no_history = false;
};

void add_common_flags(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--lambda", opts.lambda, "Regularization strength");
  cmd->add_option("--epsilon", opts.epsilon, "Sketch accuracy parameter");
  cmd->add_option("--delta", opts.delta, "Sketch failure probability");
  cmd->add_option("--seed", opts.seed, "Random seed");
  cmd->add_option("--max-iters", opts.max_iters, "Maximum ALS iterations");
  cmd->add_option("--tol", opts.tol, "Relative loss-change stopping tolerance");
  cmd->add_option("--out-dir", opts.out_dir, "Output directory");
  cmd->add_option("--sample-override", opts.sample_override,
                  "Override the sketched sample count (0 = formula)");
  cmd->add_option("--config", opts.config_path,
                  "JSON config file; command-line flags win");
}

// Values from --config fill in any option the user did not pass on the
// command line.
void apply_config_file(const CLI::App* cmd, RunOptions& opts) {
  if (opts.config_path.empty()) return;
  std::ifstream in(opts.config_path);
  if (!in) {
    throw CLI::ValidationError("--config: cannot open " + opts.config_path);
  }
  nlohmann::json config = nlohmann::json::parse(in);

  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  if (config.contains("lambda") && unset("--lambda")) opts.lambda = config["lambda"];
  if (config.contains("epsilon") && unset("--epsilon")) opts.epsilon = config["epsilon"];
  if (config.contains("delta") && unset("--delta")) opts.delta = config["delta"];
  if (config.contains("seed") && unset("--seed")) opts.seed = config["seed"];
  if (config.contains("max_iters") && unset("--max-iters")) {
    opts.max_iters = config["max_iters"];
  }
  if (config.contains("tol") && unset("--tol")) opts.tol = config["tol"];
  if (config.contains("mode") && unset("--mode")) {
    opts.mode = config["mode"].get<std::string>();
  }
  if (config.contains("sample_override") && unset("--sample-override")) {
    opts.sample_override = config["sample_override"];
  }
}

rtucker_als_options make_als_options(const RunOptions& opts, bool sketched) {
  rtucker_als_options als;
  rtucker_als_options_init(&als);
  als.lambda = opts.lambda;
  als.sketched_core = sketched ? 1 : 0;
  als.epsilon = opts.epsilon;
  als.delta = opts.delta;
  als.seed = opts.seed;
  als.max_iterations = opts.max_iters;
  als.tolerance = opts.tol;
  als.sample_count_override = opts.sample_override;
  als.record_history = opts.no_history ? 0 : 1;
  return als;
}

int write_history_csv(const rtucker_als_result* result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitUsage;
  }
  out << "iteration,step,loss,rmse\n";
  char step[16];
  const uint64_t rows = rtucker_result_history_size(result);
  for (uint64_t i = 0; i < rows; ++i) {
    uint32_t iteration = 0;
    double loss = 0.0, rmse = 0.0;
    rtucker_result_history_row(result, i, &iteration, step, sizeof(step), &loss, &rmse);
    char line[160];
    std::snprintf(line, sizeof(line), "%u,%s,%.12g,%.12g\n", iteration, step, loss, rmse);
    out << line;
  }
  return kExitOk;
}

int write_timing_csv(const rtucker_als_result* result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitUsage;
  }
  out << "step_type,mean_seconds,iterations\n";
  char step[16];
  const uint64_t rows = rtucker_result_timing_size(result);
  for (uint64_t i = 0; i < rows; ++i) {
    double mean = 0.0;
    uint64_t count = 0;
    rtucker_result_timing_row(result, i, step, sizeof(step), &mean, &count);
    char line[160];
    std::snprintf(line, sizeof(line), "%s,%.9g,%" PRIu64 "\n", step, mean, count);
    out << line;
  }
  return kExitOk;
}

int cmd_generate(const RunOptions& opts, const std::string& out_name) {
  if (opts.shape.empty()) {
    std::cerr << "error: --shape is required\n";
    return kExitUsage;
  }
  std::vector<uint64_t> planted = opts.planted_ranks;
  if (planted.empty()) planted.assign(opts.shape.size(), 8);
  if (planted.size() != opts.shape.size()) {
    std::cerr << "error: --planted-ranks order must match --shape\n";
    return kExitUsage;
  }
  warn_large_allocation(opts.shape);

  rtucker_tensor* tensor = nullptr;
  uint64_t checksum = 0;
  const rtucker_status status = rtucker_tensor_generate(
      opts.shape.data(), planted.data(), static_cast<uint32_t>(opts.shape.size()),
      opts.noise_fraction, opts.noise_sigma, opts.seed, &tensor, &checksum);
  if (status != RTUCKER_OK) return report_failure("generate", status);

  std::filesystem::create_directories(opts.out_dir);
  const std::string tensor_path =
      (std::filesystem::path(opts.out_dir) / out_name).string();
  const rtucker_status wstatus = rtucker_tensor_write(tensor, tensor_path.c_str());
  rtucker_tensor_free(tensor);
  if (wstatus != RTUCKER_OK) return report_failure("write tensor", wstatus);

  char checksum_hex[32];
  std::snprintf(checksum_hex, sizeof(checksum_hex), "%016" PRIx64, checksum);
  nlohmann::json sidecar = {
      {"seed", opts.seed},
      {"shape", opts.shape},
      {"planted_ranks", planted},
      {"noise_fraction", opts.noise_fraction},
      {"noise_sigma", opts.noise_sigma},
      {"planted_model_checksum", std::string(checksum_hex)},
  };
  std::ofstream side(tensor_path + ".json");
  side << sidecar.dump(2) << "\n";
  std::cout << "wrote " << tensor_path << "\n";
  return kExitOk;
}

int cmd_decompose(const RunOptions& opts) {
  if (opts.input.empty() || opts.ranks.empty()) {
    std::cerr << "error: --input and --ranks are required\n";
    return kExitUsage;
  }
  if (opts.mode != "exact" && opts.mode != "sketched") {
    std::cerr << "error: --mode must be exact or sketched\n";
    return kExitUsage;
  }
  if (!std::filesystem::exists(opts.out_dir)) {
    std::cerr << "error: output directory " << opts.out_dir << " does not exist\n";
    return kExitUsage;
  }

  rtucker_tensor* tensor = nullptr;
  rtucker_status status =
      opts.input.size() > 4 && opts.input.substr(opts.input.size() - 4) == ".csv"
          ? rtucker_tensor_read_csv(opts.input.c_str(), &tensor)
          : rtucker_tensor_read(opts.input.c_str(), &tensor);
  if (status != RTUCKER_OK) return report_failure("read tensor", status);

  const rtucker_als_options als = make_als_options(opts, opts.mode == "sketched");
  rtucker_als_result* result = nullptr;
  status = rtucker_als_run(tensor, opts.ranks.data(),
                           static_cast<uint32_t>(opts.ranks.size()), &als, &result);
  rtucker_tensor_free(tensor);
  if (status != RTUCKER_OK) return report_failure("als", status);

  const std::filesystem::path dir(opts.out_dir);
  int rc = write_history_csv(result, (dir / "history.csv").string());
  if (rc == kExitOk) rc = write_timing_csv(result, (dir / "timing.csv").string());
  if (rc == kExitOk) {
    rtucker_model* model = nullptr;
    status = rtucker_result_model(result, &model);
    if (status == RTUCKER_OK) {
      status = rtucker_model_write(model, (dir / "model.rtkm").string().c_str());
      rtucker_model_free(model);
    }
    if (status != RTUCKER_OK) rc = report_failure("write model", status);
  }
  if (rc == kExitOk) {
    std::printf("mode=%s iterations=%u final_loss=%.12g final_rmse=%.12g\n",
                opts.mode.c_str(), rtucker_result_iterations(result),
                rtucker_result_final_loss(result), rtucker_result_final_rmse(result));
  }
  rtucker_result_free(result);
  return rc;
}

int cmd_benchmark(const RunOptions& opts, const std::vector<std::string>& shapes,
                  const std::vector<std::string>& ranks_list) {
  std::vector<std::vector<uint64_t>> shape_grid;
  for (const std::string& s : shapes) shape_grid.push_back(parse_dims(s));
  if (shape_grid.empty()) shape_grid.push_back({32, 32, 32});
  std::vector<std::vector<uint64_t>> rank_grid;
  for (const std::string& r : ranks_list) rank_grid.push_back(parse_dims(r));
  if (rank_grid.empty()) {
    rank_grid.push_back({2, 2, 2});
    rank_grid.push_back({4, 4, 4});
  }

  std::filesystem::create_directories(opts.out_dir);
  const std::string csv_path =
      (std::filesystem::path(opts.out_dir) / "benchmark.csv").string();
  std::ofstream out(csv_path);
  if (!out) {
    std::cerr << "error: cannot write " << csv_path << "\n";
    return kExitUsage;
  }
  const std::size_t order = shape_grid.front().size();
  out << "shape,rank";
  for (std::size_t n = 1; n <= order; ++n) out << ",f" << n << "_s";
  out << ",exact_core_s,exact_rmse,sketched_core_s,sketched_rmse\n";

  for (const auto& shape : shape_grid) {
    warn_large_allocation(shape);
    std::vector<uint64_t> planted = opts.planted_ranks;
    if (planted.empty()) planted.assign(shape.size(), 8);
    rtucker_tensor* tensor = nullptr;
    uint64_t checksum = 0;
    rtucker_status status = rtucker_tensor_generate(
        shape.data(), planted.data(), static_cast<uint32_t>(shape.size()),
        opts.noise_fraction, opts.noise_sigma, opts.seed, &tensor, &checksum);
    if (status != RTUCKER_OK) return report_failure("generate", status);

    for (const auto& ranks : rank_grid) {
      double factor_means[8] = {0};
      double core_means[2] = {0};
      double rmses[2] = {0};
      for (int pass = 0; pass < 2; ++pass) {
        const rtucker_als_options als = make_als_options(opts, pass == 1);
        rtucker_als_result* result = nullptr;
        status = rtucker_als_run(tensor, ranks.data(),
                                 static_cast<uint32_t>(ranks.size()), &als, &result);
        if (status != RTUCKER_OK) {
          rtucker_tensor_free(tensor);
          return report_failure("als", status);
        }
        char step[16];
        const uint64_t timing_rows = rtucker_result_timing_size(result);
        for (uint64_t i = 0; i < timing_rows; ++i) {
          double mean = 0.0;
          uint64_t count = 0;
          rtucker_result_timing_row(result, i, step, sizeof(step), &mean, &count);
          if (step[0] == 'F' && pass == 0 && i < 8) {
            factor_means[i] = mean;
          } else if (step[0] == 'C') {
            core_means[pass] = mean;
          }
        }
        rmses[pass] = rtucker_result_final_rmse(result);
        rtucker_result_free(result);
      }
      out << dims_label(shape) << "," << dims_label(ranks);
      char buf[64];
      for (std::size_t n = 0; n < order; ++n) {
        std::snprintf(buf, sizeof(buf), ",%.6g", factor_means[n]);
        out << buf;
      }
      std::snprintf(buf, sizeof(buf), ",%.6g,%.6g,%.6g,%.6g", core_means[0], rmses[0],
                    core_means[1], rmses[1]);
      out << buf << "\n";
      std::cout << "benchmarked shape " << dims_label(shape) << " rank "
                << dims_label(ranks) << "\n";
    }
    rtucker_tensor_free(tensor);
  }
  std::cout << "wrote " << csv_path << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, uint64_t seed, const std::string& out_dir) {
  int passed = 0;
  char* report = nullptr;
  const rtucker_status status =
      rtucker_verify_suite(suite.c_str(), seed, &passed, &report);
  if (status != RTUCKER_OK) return report_failure("verify", status);

  const nlohmann::json parsed = nlohmann::json::parse(report);
  for (const auto& suite_result : parsed) {
    std::printf("suite %-10s %s (%.2fs)\n",
                suite_result["suite"].get<std::string>().c_str(),
                suite_result["passed"].get<bool>() ? "PASS" : "FAIL",
                suite_result["elapsed_seconds"].get<double>());
    for (const auto& check : suite_result["checks"]) {
      std::printf("  %-42s %s (observed %.3g, bound %.3g)\n",
                  check["name"].get<std::string>().c_str(),
                  check["passed"].get<bool>() ? "pass" : "FAIL",
                  check["observed"].get<double>(), check["bound"].get<double>());
    }
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / "verify_report.json");
    out << report << "\n";
  }
  rtucker_string_free(report);
  return passed ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Tucker decomposition with leverage-score sketching"};
  app.require_subcommand(1);
  RunOptions opts;

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic tensor");
  std::string shape_text, planted_text, out_name = "tensor.dten";
  generate->add_option("--shape", shape_text, "Tensor shape, e.g. 32,32,32")
      ->required();
  generate->add_option("--planted-ranks", planted_text,
                       "Planted core shape (default 8 per mode)");
  generate->add_option("--noise-fraction", opts.noise_fraction,
                       "Fraction of entries receiving Gaussian noise");
  generate->add_option("--noise-sigma", opts.noise_sigma, "Noise standard deviation");
  generate->add_option("--out", out_name, "Output file name");
  add_common_flags(generate, opts);

  CLI::App* decompose = app.add_subcommand("decompose", "Fit a Tucker decomposition");
  std::string ranks_text;
  decompose->add_option("--input", opts.input, "Tensor file (.dten or .csv)");
  decompose->add_option("--ranks", ranks_text, "Multilinear rank, e.g. 4,4,4");
  decompose->add_option("--mode", opts.mode, "Core update: exact or sketched");
  decompose->add_flag("--no-history", opts.no_history,
                      "Record history per iteration only");
  add_common_flags(decompose, opts);

  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Sweep shapes and ranks, compare exact vs sketched");
  std::vector<std::string> bench_shapes, bench_ranks;
  benchmark->add_option("--shape", bench_shapes, "Shape (repeatable)");
  benchmark->add_option("--ranks", bench_ranks, "Rank tuple (repeatable)");
  benchmark->add_option("--planted-ranks", planted_text, "Planted core shape");
  benchmark->add_option("--noise-fraction", opts.noise_fraction,
                        "Fraction of entries receiving noise");
  benchmark->add_option("--noise-sigma", opts.noise_sigma, "Noise std deviation");
  add_common_flags(benchmark, opts);

  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  std::string suite = "all";
  verify->add_option("suite", suite, "leverage, kronecker, missing, structural, all");
  std::string verify_out;
  verify->add_option("--out-dir", verify_out, "Directory for the JSON report");
  uint64_t verify_seed = 7;
  verify->add_option("--seed", verify_seed, "Suite seed");

  try {
    app.parse(argc, argv);
    for (CLI::App* cmd : {generate, decompose, benchmark}) {
      if (cmd->parsed()) apply_config_file(cmd, opts);
    }
    if (!shape_text.empty()) opts.shape = parse_dims(shape_text);
    if (!planted_text.empty()) opts.planted_ranks = parse_dims(planted_text);
    if (!ranks_text.empty()) opts.ranks = parse_dims(ranks_text);
    // Benchmark sweeps default to the fixed-iteration protocol.
    if (benchmark->parsed() &&
        benchmark->get_option_no_throw("--max-iters")->count() == 0 &&
        opts.max_iters == 50) {
      opts.max_iters = 10;
      opts.tol = 0.0;
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(opts, out_name);
    if (decompose->parsed()) return cmd_decompose(opts);
    if (benchmark->parsed()) return cmd_benchmark(opts, bench_shapes, bench_ranks);
    if (verify->parsed()) return cmd_verify(suite, verify_seed, verify_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
