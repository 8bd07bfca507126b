#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rtucker {

// Row-major dense matrix of doubles; the universal matrix carrier for this
// library. Constructors taking data reject NaN/Inf. Column access is strided;
// all layout-sensitive code (unfoldings, vectorization, Kronecker indexing)
// assumes this row-major convention.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// y = A x and y = A^T x.
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);
std::vector<double> matvec_transposed(const DenseMatrix& a, std::span<const double> x);

// A^T A, computed symmetrically.
DenseMatrix gram(const DenseMatrix& a);

// Explicit Kronecker product; used by oracles and small-instance paths only.
DenseMatrix kronecker_product(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double dot(std::span<const double> x, std::span<const double> y);
double norm2_squared(std::span<const double> x);

}  // namespace rtucker
