#include "tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace rtucker {

namespace {

std::size_t checked_volume(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > DenseTensor::kMaxOrder) {
    throw std::invalid_argument("DenseTensor: order must be in [1, 8]");
  }
  std::size_t volume = 1;
  for (std::size_t dim : shape) {
    if (dim == 0) {
      throw std::invalid_argument("DenseTensor: zero-length dimension");
    }
    if (volume > static_cast<std::size_t>(-1) / dim) {
      throw std::invalid_argument("DenseTensor: shape overflow");
    }
    volume *= dim;
  }
  return volume;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_volume(shape_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != checked_volume(shape_)) {
    throw std::invalid_argument("DenseTensor: data length != product of dims");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("DenseTensor: non-finite entry");
    }
  }
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  std::size_t off = 0;
  for (std::size_t n = 0; n < shape_.size(); ++n) {
    off = off * shape_[n] + index[n];
  }
  return off;
}

DenseMatrix unfold(const DenseTensor& t, std::size_t mode) {
  const std::size_t order = t.order();
  if (mode < 1 || mode > order) {
    throw std::invalid_argument("unfold: mode out of range");
  }
  const std::size_t axis = mode - 1;
  const std::size_t rows = t.dim(axis);
  const std::size_t cols = t.size() / rows;

  // Strides of the canonical layout, plus the stride structure of the
  // column index (remaining modes in increasing order, last fastest).
  std::size_t inner = 1;  // product of dims after axis
  for (std::size_t n = axis + 1; n < order; ++n) inner *= t.dim(n);
  const std::size_t axis_stride = inner;
  // Flat offset = outer * (dim(axis) * inner) + i_axis * inner + inner_idx,
  // column = outer * inner + inner_idx. Iterate in source order.
  DenseMatrix m(rows, cols);
  const std::size_t outer_count = t.size() / (rows * inner);
  const double* src = t.data();
  for (std::size_t outer = 0; outer < outer_count; ++outer) {
    for (std::size_t i = 0; i < rows; ++i) {
      const double* block = src + (outer * rows + i) * axis_stride;
      double* dst = m.data() + i * cols + outer * inner;
      for (std::size_t k = 0; k < inner; ++k) dst[k] = block[k];
    }
  }
  return m;
}

DenseTensor fold(const DenseMatrix& m, std::size_t mode,
                 const std::vector<std::size_t>& shape) {
  const std::size_t order = shape.size();
  if (mode < 1 || mode > order) {
    throw std::invalid_argument("fold: mode out of range");
  }
  const std::size_t axis = mode - 1;
  DenseTensor t(shape);
  const std::size_t rows = shape[axis];
  if (m.rows() != rows || m.cols() != t.size() / rows) {
    throw std::invalid_argument("fold: matrix shape inconsistent with target");
  }
  std::size_t inner = 1;
  for (std::size_t n = axis + 1; n < order; ++n) inner *= shape[n];
  const std::size_t outer_count = t.size() / (rows * inner);
  double* dst = t.data();
  for (std::size_t outer = 0; outer < outer_count; ++outer) {
    for (std::size_t i = 0; i < rows; ++i) {
      const double* src = m.data() + i * m.cols() + outer * inner;
      double* block = dst + (outer * rows + i) * inner;
      for (std::size_t k = 0; k < inner; ++k) block[k] = src[k];
    }
  }
  return t;
}

DenseTensor mode_n_product(const DenseTensor& t, const DenseMatrix& m, std::size_t mode) {
  if (mode < 1 || mode > t.order()) {
    throw std::invalid_argument("mode_n_product: mode out of range");
  }
  if (m.cols() != t.dim(mode - 1)) {
    throw std::invalid_argument("mode_n_product: cols(m) != I_n");
  }
  const DenseMatrix unfolded = unfold(t, mode);
  const DenseMatrix product = matmul(m, unfolded);
  std::vector<std::size_t> new_shape = t.shape();
  new_shape[mode - 1] = m.rows();
  return fold(product, mode, new_shape);
}

std::vector<double> vectorize(const DenseTensor& t) {
  return {t.data(), t.data() + t.size()};
}

DenseTensor devectorize(std::vector<double> v, std::vector<std::size_t> shape) {
  return DenseTensor(std::move(shape), std::move(v));
}

double frobenius_norm(const DenseTensor& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * t[i];
  return std::sqrt(s);
}

double rmse(const DenseTensor& t, const DenseTensor& u) {
  if (t.shape() != u.shape()) {
    throw std::invalid_argument("rmse: shape mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = t[i] - u[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(t.size()));
}

}  // namespace rtucker
