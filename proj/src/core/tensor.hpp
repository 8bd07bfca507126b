#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dense_matrix.hpp"

namespace rtucker {

// Dense N-way tensor, N <= 8. Canonical memory order: the last index varies
// fastest (row-major over the index tuple), and vectorization follows the
// same order. Under this convention
//   vec(G x_1 A1 x_2 ... x_N AN) = (A1 (x) A2 (x) ... (x) AN) vec(G),
// which is the identity the core-update solver relies on.
class DenseTensor {
 public:
  static constexpr std::size_t kMaxOrder = 8;

  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::size_t> shape);  // zero-filled
  DenseTensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t dim(std::size_t n) const { return shape_[n]; }
  std::size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  double& at(std::span<const std::size_t> index) { return data_[offset(index)]; }

  std::size_t offset(std::span<const std::size_t> index) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Mode-n unfolding (modes are 1-based to match the usual notation): an
// I_n x (prod of the other dims) matrix whose columns are indexed by the
// remaining modes in increasing mode order, last varying fastest.
DenseMatrix unfold(const DenseTensor& t, std::size_t mode);
DenseTensor fold(const DenseMatrix& m, std::size_t mode,
                 const std::vector<std::size_t>& shape);

// (X x_n A)_{i1..j..iN} = sum_{i_n} x_{i1..iN} a_{j i_n}; cols(m) must equal I_n.
DenseTensor mode_n_product(const DenseTensor& t, const DenseMatrix& m, std::size_t mode);

std::vector<double> vectorize(const DenseTensor& t);
DenseTensor devectorize(std::vector<double> v, std::vector<std::size_t> shape);

double frobenius_norm(const DenseTensor& t);
double rmse(const DenseTensor& t, const DenseTensor& u);

}  // namespace rtucker
