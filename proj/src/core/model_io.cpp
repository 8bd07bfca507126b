#include "model_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rtucker {

namespace {

template <typename T>
void write_raw(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const char* what) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw std::runtime_error(std::string("read_model: truncated ") + what);
  }
  return value;
}

}  // namespace

void write_model(const TuckerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_model: cannot open " + path);
  }
  out.write("RTKM", 4);
  write_raw<std::uint8_t>(out, 1);
  write_raw<double>(out, model.lambda);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(model.order()));
  for (std::size_t dim : model.core.shape()) {
    write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(dim));
  }
  out.write(reinterpret_cast<const char*>(model.core.data()),
            static_cast<std::streamsize>(model.core.size() * sizeof(double)));
  for (const DenseMatrix& f : model.factors) {
    write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(f.rows()));
    write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(f.cols()));
    out.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("write_model: write failed for " + path);
  }
}

TuckerModel read_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_model: cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RTKM", 4) != 0) {
    throw std::runtime_error("read_model: bad magic in " + path);
  }
  if (read_raw<std::uint8_t>(in, "version") != 1) {
    throw std::runtime_error("read_model: unsupported version");
  }
  TuckerModel model;
  model.lambda = read_raw<double>(in, "lambda");
  const auto order = read_raw<std::uint32_t>(in, "order");
  if (order == 0 || order > DenseTensor::kMaxOrder) {
    throw std::runtime_error("read_model: order outside [1, 8]");
  }
  std::vector<std::size_t> core_shape(order);
  std::size_t core_size = 1;
  for (std::uint32_t n = 0; n < order; ++n) {
    core_shape[n] = static_cast<std::size_t>(read_raw<std::uint64_t>(in, "core shape"));
    core_size *= core_shape[n];
  }
  std::vector<double> core_data(core_size);
  in.read(reinterpret_cast<char*>(core_data.data()),
          static_cast<std::streamsize>(core_size * sizeof(double)));
  if (!in) {
    throw std::runtime_error("read_model: truncated core payload");
  }
  model.core = DenseTensor(std::move(core_shape), std::move(core_data));
  model.factors.reserve(order);
  for (std::uint32_t n = 0; n < order; ++n) {
    const auto rows = static_cast<std::size_t>(read_raw<std::uint64_t>(in, "factor rows"));
    const auto cols = static_cast<std::size_t>(read_raw<std::uint64_t>(in, "factor cols"));
    std::vector<double> data(rows * cols);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) {
      throw std::runtime_error("read_model: truncated factor payload");
    }
    model.factors.emplace_back(rows, cols, std::move(data));
  }
  return model;
}

}  // namespace rtucker
