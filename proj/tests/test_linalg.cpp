#include <cmath>
#include <random>

#include "doctest.h"
#include "soul/linalg.hpp"

using namespace soul;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (auto& v : m.data()) v = n(gen);
  return m;
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  Vector v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("gemv on a small example") {
  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = -1; a(1, 1) = 0; a(1, 2) = 4;
  Vector y(2), yt(3);
  linalg::gemv(a, Vector{1, 1, 1}, y);
  CHECK(y == Vector{6, 3});
  linalg::gemv_t(a, Vector{1, 2}, yt);
  CHECK(yt == Vector{-1, 2, 11});
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{3, 5}, {500, 1000}, {1000, 7}, {64, 2048}}) {
    const Matrix a = random_matrix(r, c, r * 31 + c);
    const Vector x = random_vector(c, 1);
    const Vector u = random_vector(r, 2);
    Vector ys(r), yp(r), yd(r), ts(c), tp(c), td(c);
    linalg::serial::gemv(a, x, ys);
    linalg::parallel::gemv(a, x, yp);
    linalg::gemv(a, x, yd);
    linalg::serial::gemv_t(a, u, ts);
    linalg::parallel::gemv_t(a, u, tp);
    linalg::gemv_t(a, u, td);
    CHECK(ys == yp);
    CHECK(ys == yd);
    CHECK(ts == tp);
    CHECK(ts == td);
  }
}

TEST_CASE("gemv_t is the adjoint of gemv") {
  const Matrix a = random_matrix(40, 25, 3);
  const Vector x = random_vector(25, 4);
  const Vector u = random_vector(40, 5);
  Vector ax(40), atu(25);
  linalg::gemv(a, x, ax);
  linalg::gemv_t(a, u, atu);
  CHECK(linalg::dot(ax, u) == doctest::Approx(linalg::dot(x, atu)).epsilon(1e-12));
}

TEST_CASE("spectral norm of a diagonal matrix") {
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = -3.0;
  a(2, 2) = 2.0;
  CHECK(linalg::spectral_norm_sq(a) == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("norms") {
  const Vector v{3.0, -4.0};
  CHECK(linalg::norm2(v) == 5.0);
  CHECK(linalg::norm_inf(v) == 4.0);
  CHECK(linalg::dot(v, v) == 25.0);
}

TEST_CASE("dimension mismatch") {
  const Matrix a(2, 3);
  Vector y(2);
  CHECK_THROWS_AS(linalg::gemv(a, Vector{1.0}, y), std::invalid_argument);
  Vector t(2);
  CHECK_THROWS_AS(linalg::gemv_t(a, Vector{1.0, 1.0}, t), std::invalid_argument);
}

}  // TEST_SUITE
