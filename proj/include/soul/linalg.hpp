#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "soul/core.hpp"

namespace soul {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace linalg {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

// Reference kernels. Kept for testing and for the benchmark baseline.
namespace serial {
/// y = A x
void gemv(const Matrix& A, std::span<const double> x, std::span<double> y);
/// y = A^T x
void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y);
}  // namespace serial

// OpenMP kernels. Each output entry is accumulated by one thread in the same
// order as the serial kernel, so results are bit-identical to serial:: for
// any thread count.
namespace parallel {
void gemv(const Matrix& A, std::span<const double> x, std::span<double> y);
void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y);
}  // namespace parallel

/// Dispatching kernels used by the models (OpenMP above a size threshold).
void gemv(const Matrix& A, std::span<const double> x, std::span<double> y);
void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y);

/// Largest singular value squared, ||A||_2^2, by power iteration on A^T A.
double spectral_norm_sq(const Matrix& A, int iterations = 50);

}  // namespace linalg
}  // namespace soul
