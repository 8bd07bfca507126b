#include "tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rtucker {

namespace {

// The format is explicitly little-endian; this library targets LE hosts.
static_assert(std::endian::native == std::endian::little,
              "DTEN1 I/O assumes a little-endian host");

template <typename T>
void write_raw(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const char* what) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw std::runtime_error(std::string("read_tensor: truncated ") + what);
  }
  return value;
}

}  // namespace

void write_tensor(const DenseTensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_tensor: cannot open " + path);
  }
  out.write("DTEN", 4);
  write_raw<std::uint8_t>(out, 1);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
  for (std::size_t dim : t.shape()) {
    write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(dim));
  }
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("write_tensor: write failed for " + path);
  }
}

DenseTensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_tensor: cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DTEN", 4) != 0) {
    throw std::runtime_error("read_tensor: bad magic in " + path);
  }
  const auto version = read_raw<std::uint8_t>(in, "version");
  if (version != 1) {
    throw std::runtime_error("read_tensor: unsupported version");
  }
  const auto order = read_raw<std::uint32_t>(in, "order");
  if (order == 0 || order > DenseTensor::kMaxOrder) {
    throw std::runtime_error("read_tensor: order outside [1, 8]");
  }
  std::vector<std::size_t> shape(order);
  std::size_t volume = 1;
  for (std::uint32_t n = 0; n < order; ++n) {
    const auto dim = read_raw<std::uint64_t>(in, "shape");
    if (dim == 0 || (volume > 0 && dim > static_cast<std::uint64_t>(-1) / volume)) {
      throw std::runtime_error("read_tensor: shape overflow");
    }
    shape[n] = static_cast<std::size_t>(dim);
    volume *= shape[n];
  }
  std::vector<double> data(volume);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(volume * sizeof(double)));
  if (!in || static_cast<std::size_t>(in.gcount()) != volume * sizeof(double)) {
    throw std::runtime_error("read_tensor: truncated payload in " + path);
  }
  return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor read_tensor_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_tensor_csv: cannot open " + path);
  }
  std::vector<std::vector<std::size_t>> indices;
  std::vector<double> values;
  std::vector<std::size_t> shape;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> fields;
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(std::stod(field));
    }
    if (fields.size() < 2) {
      throw std::runtime_error("read_tensor_csv: line " + std::to_string(line_no) +
                               " needs at least one index and a value");
    }
    std::vector<std::size_t> index(fields.size() - 1);
    for (std::size_t n = 0; n + 1 < fields.size(); ++n) {
      if (fields[n] < 0.0) {
        throw std::runtime_error("read_tensor_csv: negative index on line " +
                                 std::to_string(line_no));
      }
      index[n] = static_cast<std::size_t>(fields[n]);
    }
    if (shape.empty()) {
      shape.assign(index.size(), 0);
    } else if (shape.size() != index.size()) {
      throw std::runtime_error("read_tensor_csv: inconsistent order on line " +
                               std::to_string(line_no));
    }
    for (std::size_t n = 0; n < index.size(); ++n) {
      shape[n] = std::max(shape[n], index[n] + 1);
    }
    indices.push_back(std::move(index));
    values.push_back(fields.back());
  }
  if (indices.empty()) {
    throw std::runtime_error("read_tensor_csv: no entries in " + path);
  }
  DenseTensor t(shape);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    t.at(indices[k]) = values[k];
  }
  return t;
}

}  // namespace rtucker
