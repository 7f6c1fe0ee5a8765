#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "soul/models/toy_gaussian.hpp"
#include "soul/validation/checks.hpp"
#include "soul/validation/drift.hpp"
#include "soul/validation/gradient_suite.hpp"
#include "soul/validation/thme.hpp"

using namespace soul;

namespace {

std::vector<Vector> gaussian_samples(std::size_t n, double mean, double var, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(mean, std::sqrt(var));
  std::vector<Vector> out(n);
  for (auto& s : out) s = {nd(gen)};
  return out;
}

const GradientFn std_gaussian = [](std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
};

}  // namespace

TEST_SUITE("validation") {

TEST_CASE("thme recovers unit mass of a uniform density") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<Vector> samples(100000);
  for (auto& s : samples) s = {u(gen), u(gen)};
  const auto log_density = [](std::span<const double>) { return std::log(0.25); };
  const ThmeEstimate e = thme(samples, log_density);
  CHECK(std::abs(std::exp(e.log_phat) - 1.0) < 0.05);
  CHECK(e.n_inside == 40000);
}

TEST_CASE("thme on the conjugate Gaussian") {
  for (double theta : {-0.5, 1.5, 3.0}) {
    const ToyGaussianModel m(1.5, 1.0, ParameterDomain::uniform(1, -10.0, 10.0));
    const auto samples = gaussian_samples(100000, m.posterior_mean(theta), m.posterior_var(), 17);
    const auto lj = [&](std::span<const double> x) { return m.log_joint(x, Vector{theta}); };
    const ThmeEstimate e = thme(samples, lj);
    CHECK(std::abs(e.log_phat - m.log_marginal(theta)) < 0.05);
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error < 0.05);
  }
}

TEST_CASE("thme is invariant to sample order") {
  const ToyGaussianModel m(0.0, 2.0, ParameterDomain::uniform(1, -10.0, 10.0));
  auto samples = gaussian_samples(5000, m.posterior_mean(0.0), m.posterior_var(), 4);
  const auto lj = [&](std::span<const double> x) { return m.log_joint(x, Vector{0.0}); };
  const double a = thme(samples, lj).log_phat;
  std::mt19937_64 gen(1);
  std::shuffle(samples.begin(), samples.end(), gen);
  CHECK(thme(samples, lj).log_phat == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("thme log-space result agrees with a direct linear-space sum") {
  const ToyGaussianModel m(0.4, 1.0, ParameterDomain::uniform(1, -10.0, 10.0));
  const auto samples = gaussian_samples(200, m.posterior_mean(0.2), m.posterior_var(), 5);
  const auto lj = [&](std::span<const double> x) { return m.log_joint(x, Vector{0.2}); };
  const ThmeEstimate e = thme(samples, lj, 0.4);

  double mean = 0.0;
  for (const auto& s : samples) mean += s[0];
  mean /= 200.0;
  Vector dist;
  for (const auto& s : samples) dist.push_back(std::abs(s[0] - mean));
  Vector sorted = dist;
  std::sort(sorted.begin(), sorted.end());
  const double r = sorted[79];
  double inv = 0.0;
  std::size_t inside = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    if (dist[k] <= r) {
      inv += std::exp(-lj(samples[k]));
      ++inside;
    }
  }
  CHECK(inside == e.n_inside);
  CHECK(e.radius == r);
  CHECK(e.log_phat == doctest::Approx(std::log(200.0 * 2.0 * r / inv)).epsilon(1e-12));
}

TEST_CASE("thme input checks") {
  const auto lj = [](std::span<const double>) { return 0.0; };
  CHECK_THROWS_AS(thme(gaussian_samples(10, 0.0, 1.0, 1), lj), std::invalid_argument);
  CHECK_THROWS_AS(thme(gaussian_samples(100, 0.0, 1.0, 1), lj, 1.0), std::invalid_argument);
  std::vector<Vector> same(100, Vector{1.0});
  CHECK_THROWS_AS(thme(same, lj), std::invalid_argument);
}

TEST_CASE("fit_quadratic recovers an exact parabola") {
  const Vector xs{-1.0, 0.0, 0.5, 1.0, 2.0, 3.5};
  Vector fs;
  for (double x : xs) fs.push_back(-2.0 * x * x + 3.0 * x - 1.0);
  const QuadraticFit q = fit_quadratic(xs, fs);
  CHECK(q.a2 == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(q.a1 == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(q.a0 == doctest::Approx(-1.0).epsilon(1e-10));
  REQUIRE(q.argmax().has_value());
  CHECK(*q.argmax() == doctest::Approx(0.75));

  Vector up;
  for (double x : xs) up.push_back(x * x);
  CHECK_FALSE(fit_quadratic(xs, up).argmax().has_value());
}

TEST_CASE("fit_quadratic on a symmetric grid peaks at the centre") {
  const Vector xs{1e4, 1e4 + 1, 1e4 + 2, 1e4 + 3, 1e4 + 4};
  const Vector fs{-4.0, -1.0, 0.0, -1.0, -4.0};
  CHECK(*fit_quadratic(xs, fs).argmax() == doctest::Approx(1e4 + 2).epsilon(1e-12));
}

TEST_CASE("thme scan on the conjugate Gaussian finds theta* = y") {
  const ToyGaussianModel m(1.5, 1.0, ParameterDomain::uniform(1, -100.0, 100.0));
  Vector grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(-1.0 + 0.5 * k);
  ThmeChainConfig chain;
  chain.gamma = 0.05;
  chain.burnin = 1000;
  chain.n_samples = 100000;
  const ThmeScan scan = thme_scan(m, grid, Vector{1.5}, chain);
  REQUIRE(scan.theta_star.has_value());
  CHECK(std::abs(*scan.theta_star - 1.5) < 0.05);
  CHECK(concavity_check(scan.theta_grid, scan.log_marginal, 3.0 * scan.pooled_stderr()));
  CHECK(scan.log_marginal.size() == grid.size());
}

TEST_CASE("gradcheck calibration") {
  const ScalarFn f = [](std::span<const double> x) { return 0.5 * x[0] * x[0] + 3.0 * x[0] * x[1] - x[1] * x[1]; };
  const VectorFn exact = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0] + 3.0 * x[1];
    g[1] = 3.0 * x[0] - 2.0 * x[1];
  };
  const VectorFn doubled = [&](std::span<const double> x, std::span<double> g) {
    exact(x, g);
    for (auto& v : g) v *= 2.0;
  };
  const VectorFn off = [&](std::span<const double> x, std::span<double> g) {
    exact(x, g);
    for (auto& v : g) v *= 1.01;
  };
  const Vector p{0.7, -1.3};
  CHECK(gradcheck(f, exact, p) <= 1e-10);
  CHECK(gradcheck(f, doubled, p) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(gradcheck(f, off, p) == doctest::Approx(0.01 / 1.01).epsilon(1e-4));
}

TEST_CASE("gradient suite passes on every model gradient") {
  const auto results = gradient_suite(0, 100, 1e-5, 1e-5);
  CHECK(results.size() >= 6);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CHECK(r.pass);
    CHECK(r.points == 100);
    CHECK(r.max_error < 1e-5);
  }
}

TEST_CASE("prediction error") {
  CHECK(prediction_error(Vector{1, 0, 1}, Vector{1, 0, 1}) == 0.0);
  CHECK(prediction_error(Vector{1, 0, 1, 0}, Vector{0, 1, 0, 1}) == 1.0);
  CHECK(prediction_error(Vector{1, 0, 1, 0}, Vector{1, 1, 1, 0}) == 0.25);
  CHECK_THROWS_AS(prediction_error(Vector{1}, Vector{1, 0}), std::invalid_argument);
}

TEST_CASE("predictive labels threshold the mean probability") {
  Matrix test(3, 1);
  test(0, 0) = 1.0;
  test(1, 0) = -1.0;
  test(2, 0) = 0.0;
  const std::vector<Vector> betas{{2.0}, {-0.5}};
  const Vector y = predictive_labels(betas, test);
  // s(2) + s(-0.5) > 1 for the first row, s(-2) + s(0.5) < 1 for the second, ties go to 1.
  CHECK(y == Vector{1.0, 0.0, 1.0});
}

TEST_CASE("concavity check") {
  Vector xs, neg, pos;
  for (int k = -5; k <= 5; ++k) {
    xs.push_back(0.3 * k);
    neg.push_back(-0.09 * k * k);
    pos.push_back(0.09 * k * k);
  }
  CHECK(concavity_check(xs, neg));
  CHECK_FALSE(concavity_check(xs, pos));
  CHECK(concavity_check(xs, pos, 1.0));
  // Non-uniform grid: log of a Gaussian density stays concave.
  const Vector nx{-2.0, -1.5, 0.0, 0.1, 1.0, 4.0};
  Vector nf;
  for (double x : nx) nf.push_back(-0.5 * x * x);
  CHECK(concavity_check(nx, nf));
  CHECK_THROWS_AS(concavity_check(Vector{0.0, 0.0, 1.0}, Vector{0.0, 1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("drift constants match independent evaluations") {
  const DriftConstants a = drift_constants(TailParams{1.0, 0.5, 0.0, 2.0}, 0.1, 2);
  CHECK(a.m1_tilde == 0.25);
  CHECK(a.r_e == 4.0);
  CHECK(a.lambda_e == doctest::Approx(0.9744438824862073).epsilon(1e-14));
  CHECK(a.b_e == doctest::Approx(1.7448320637780823).epsilon(1e-14));

  const DriftConstants b = drift_constants(TailParams{2.0, 0.5, 1.0, 3.0}, 0.5, 5);
  CHECK(b.r_e == 6.0);
  CHECK(b.lambda_e == doctest::Approx(0.9016278830091764).epsilon(1e-14));
  CHECK(b.b_e == doctest::Approx(356.52407261336623).epsilon(1e-14));
  CHECK(lyapunov_ve(Vector{0.0, 0.0}, 0.25) == doctest::Approx(std::exp(0.25)));
}

TEST_CASE("Gaussian target satisfies the tail condition") {
  // <x, x> >= ||x|| 1{||x|| > 2} + ||x||^2 / 2 for every x.
  for (double r = 0.0; r < 50.0; r += 0.01) {
    REQUIRE(r * r >= (r > 2.0 ? r : 0.0) + 0.5 * r * r);
  }
}

TEST_CASE("drift check on the Gaussian target") {
  const std::vector<Vector> pts{{0.0, 0.0}, {5.0, 0.0}, {0.0, -10.0}};
  const DriftReport rep = drift_check(std_gaussian, TailParams{}, 0.1, pts, 20000, 3);
  CHECK(rep.all_pass());
  CHECK(rep.gamma_bar == 0.1);
  CHECK(rep.points[1].x_norm == 5.0);
  // The origin is inside B(0, r_e), so b_e gamma enters the bound.
  CHECK(rep.points[0].rhs > rep.points[0].lhs);

  // A repulsive drift breaks the condition far from the origin.
  const GradientFn repulsive = [](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  };
  const DriftReport bad = drift_check(repulsive, TailParams{}, 0.5, {{10.0, 0.0}}, 20000, 3);
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("drift check input validation") {
  const std::vector<Vector> pts{{0.0}};
  CHECK_THROWS_AS(drift_check(std_gaussian, TailParams{}, 1.5, pts, 100), std::invalid_argument);
  CHECK_THROWS_AS(drift_check(std_gaussian, TailParams{1.0, 0.2, 0.0, 2.0}, 0.5, pts, 100), std::invalid_argument);
  CHECK_THROWS_AS(drift_check(std_gaussian, TailParams{}, 0.1, {{0.0}, {0.0, 1.0}}, 100), std::invalid_argument);
  CHECK_THROWS_AS(drift_check(std_gaussian, TailParams{}, 0.1, {}, 100), std::invalid_argument);
}

}  // TEST_SUITE
