#include "soul/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soul::linalg {

namespace {

// Below this many matrix entries the fork/join cost dominates.
constexpr std::size_t kParallelThreshold = 1 << 15;
constexpr std::size_t kColumnBlock = 64;

void check_gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  if (x.size() != A.cols() || y.size() != A.rows()) throw std::invalid_argument("gemv: dimension mismatch");
}

void check_gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y) {
  if (x.size() != A.rows() || y.size() != A.cols()) throw std::invalid_argument("gemv_t: dimension mismatch");
}

inline double row_dot(const double* row, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
  return s;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return row_dot(a.data(), b.data(), a.size());
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

namespace serial {

void gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  check_gemv(A, x, y);
  const std::size_t n = A.cols();
  for (std::size_t i = 0; i < A.rows(); ++i) y[i] = row_dot(A.row(i).data(), x.data(), n);
}

void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y) {
  check_gemv_t(A, x, y);
  std::fill(y.begin(), y.end(), 0.0);
  const std::size_t n = A.cols();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double xi = x[i];
    const double* row = A.row(i).data();
    for (std::size_t j = 0; j < n; ++j) y[j] += row[j] * xi;
  }
}

}  // namespace serial

namespace parallel {

void gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  check_gemv(A, x, y);
  const std::size_t n = A.cols();
  const auto m = static_cast<std::ptrdiff_t>(A.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] = row_dot(A.row(i).data(), x.data(), n);
}

void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y) {
  check_gemv_t(A, x, y);
  const std::size_t n = A.cols();
  const std::size_t rows = A.rows();
  const auto blocks = static_cast<std::ptrdiff_t>((n + kColumnBlock - 1) / kColumnBlock);
  // Column blocks are independent; within a block rows are visited in order,
  // matching the serial accumulation order entry by entry.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t j0 = static_cast<std::size_t>(blk) * kColumnBlock;
    const std::size_t j1 = std::min(n, j0 + kColumnBlock);
    for (std::size_t j = j0; j < j1; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double xi = x[i];
      const double* row = A.row(i).data();
      for (std::size_t j = j0; j < j1; ++j) y[j] += row[j] * xi;
    }
  }
}

}  // namespace parallel

void gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  if (A.rows() * A.cols() >= kParallelThreshold) {
    parallel::gemv(A, x, y);
  } else {
    serial::gemv(A, x, y);
  }
}

void gemv_t(const Matrix& A, std::span<const double> x, std::span<double> y) {
  if (A.rows() * A.cols() >= kParallelThreshold) {
    parallel::gemv_t(A, x, y);
  } else {
    serial::gemv_t(A, x, y);
  }
}

double spectral_norm_sq(const Matrix& A, int iterations) {
  if (A.empty()) return 0.0;
  Vector v(A.cols(), 1.0 / std::sqrt(static_cast<double>(A.cols())));
  Vector Av(A.rows());
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    gemv(A, v, Av);
    gemv_t(A, Av, v);
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    estimate = nv;
    for (auto& e : v) e /= nv;
  }
  return estimate;
}

}  // namespace soul::linalg
