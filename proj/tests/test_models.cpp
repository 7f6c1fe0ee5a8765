#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "soul/huber.hpp"
#include "soul/models/audio.hpp"
#include "soul/models/logistic.hpp"
#include "soul/models/random_effects.hpp"
#include "soul/models/toy_gaussian.hpp"

using namespace soul;

namespace {

// Independent oracle for z(theta): adaptive quadrature of exp(-theta h(u))
// on [0, lambda] and [lambda, inf), doubled by symmetry.
double z_quadrature(double theta, double lambda) {
  auto f = [&](double u) { return std::exp(-theta * huber(u, lambda)); };
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, lambda, 15, 1e-14);
  boost::math::quadrature::exp_sinh<double> tail;
  const double outer = tail.integrate([&](double t) { return f(lambda + t); }, 1e-14);
  return 2.0 * (inner + outer);
}

LogisticData tiny_blr(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  LogisticData data;
  data.covariates = Matrix(n, d);
  for (auto& v : data.covariates.data()) v = nd(gen);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.labels[i] = (i % 3 == 0) ? 1.0 : 0.0;
  return data;
}

AudioProblem identity_problem(const Vector& y, double sigma, double lambda) {
  AudioProblem p;
  p.sensing = Matrix(y.size(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) p.sensing(i, i) = 1.0;
  p.observation = y;
  p.sigma = sigma;
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(gen);
    REQUIRE(sigmoid(v) + sigmoid(-v) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(log1p_exp(1000.0) == doctest::Approx(1000.0));
  CHECK(log1p_exp(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(std::isfinite(log1p_exp(-1000.0)));
}

TEST_CASE("huber values and knee continuity") {
  const double lam = 0.7;
  CHECK(huber(0.0, lam) == 0.0);
  CHECK(huber_grad(0.0, lam) == 0.0);
  CHECK(huber(lam, lam) == doctest::Approx(lam * lam / 2.0));
  CHECK(huber(2.0 * lam, lam) == doctest::Approx(1.5 * lam * lam));
  CHECK(huber_grad(-2.0 * lam, lam) == -lam);
  // Both branches agree at the knee.
  const double quad = lam * lam / 2.0;
  const double lin = lam * (lam - lam / 2.0);
  CHECK(std::abs(quad - lin) < 1e-12);
  CHECK(std::abs(huber_grad(std::nextafter(lam, 10.0), lam) - huber_grad(lam, lam)) < 1e-12);
  CHECK(huber_sum(Vector{0.0, 2.0 * lam, -lam}, lam) == doctest::Approx(1.5 * lam * lam + quad));
}

TEST_CASE("huber prox matches a grid minimizer") {
  for (double v : {-3.0, -0.2, 0.05, 0.9, 4.0}) {
    for (double t : {0.1, 1.0, 5.0}) {
      const double lam = 0.5;
      double best = 0.0, best_f = 1e300;
      for (int k = -400000; k <= 400000; ++k) {
        const double x = k * 1e-5;
        const double f = t * huber(x, lam) + 0.5 * (x - v) * (x - v);
        if (f < best_f) {
          best_f = f;
          best = x;
        }
      }
      CHECK(std::abs(huber_prox(v, t, lam) - best) < 2e-5);
    }
  }
}

TEST_CASE("huber normalizer matches quadrature") {
  for (double lam : {4e-5, 0.1, 1.0}) {
    for (double theta : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0, 1e3, 1e4}) {
      const double q = z_quadrature(theta, lam);
      const double z = huber_normalizer(theta, lam);
      CAPTURE(lam);
      CAPTURE(theta);
      CHECK(std::abs(z - q) / q < 1e-8);
    }
  }
}

TEST_CASE("log normalizer derivative matches finite differences") {
  for (double lam : {4e-5, 0.1, 1.0}) {
    for (double theta : {0.3, 2.0, 50.0, 5e3}) {
      const double h = 1e-5 * theta;
      const double fd = (std::log(huber_normalizer(theta + h, lam)) - std::log(huber_normalizer(theta - h, lam))) /
                        (2.0 * h);
      const double an = huber_log_normalizer_derivative(theta, lam);
      CHECK(std::abs(fd - an) / std::abs(an) < 1e-6);
      CHECK(huber_normalizer_derivative(theta, lam) ==
            doctest::Approx(an * huber_normalizer(theta, lam)).epsilon(1e-12));
    }
  }
}

TEST_CASE("huber normalizer approaches the Gaussian limit") {
  for (double theta : {0.5, 2.0, 10.0}) {
    CHECK(huber_normalizer(theta, 1e3) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi / theta)).epsilon(1e-12));
  }
}

TEST_CASE("blr gradient examples") {
  LogisticData one;
  one.covariates = Matrix(1, 2, 1.0);
  one.labels = {1.0};
  Vector g(2);
  blr_grad_x(Vector{0.0, 0.0}, 0.0, one, g);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.5));

  CHECK(blr_grad_theta(Vector{1.0, 3.0}, 1.0, one) == doctest::Approx(0.4));
  CHECK(blr_grad_theta(Vector{2.0, 2.0}, 2.0, one) == 0.0);
}

TEST_CASE("blr log joint includes the prior constant") {
  LogisticData one;
  one.covariates = Matrix(1, 2, 0.0);
  one.labels = {0.0};
  // Zero covariates: likelihood is log(1/2); prior at its mean is -(d/2) log(2 pi sigma^2).
  const double expected = -std::log(2.0) - std::log(2.0 * std::numbers::pi * 5.0);
  CHECK(blr_log_joint(Vector{0.3, 0.3}, 0.3, one) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("blr theta gradient matches finite differences of the log joint") {
  const LogisticData data = tiny_blr(30, 4, 3);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 100; ++k) {
    Vector beta(4);
    for (auto& b : beta) b = nd(gen);
    const double theta = nd(gen);
    const double h = 1e-5;
    const double fd = (blr_log_joint(beta, theta + h, data) - blr_log_joint(beta, theta - h, data)) / (2.0 * h);
    const double an = blr_grad_theta(beta, theta, data);
    REQUIRE(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("blr log joint is concave in beta") {
  const LogisticData data = tiny_blr(50, 5, 8);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> nd;
  Vector gp(5), gm(5);
  for (int k = 0; k < 200; ++k) {
    Vector beta(5), v(5);
    for (auto& b : beta) b = 2.0 * nd(gen);
    for (auto& x : v) x = nd(gen);
    const double eps = 1e-5;
    Vector bp = beta, bm = beta;
    for (std::size_t i = 0; i < 5; ++i) {
      bp[i] += eps * v[i];
      bm[i] -= eps * v[i];
    }
    blr_grad_x(bp, 0.1, data, gp);
    blr_grad_x(bm, 0.1, data, gm);
    double vhv = 0.0;
    for (std::size_t i = 0; i < 5; ++i) vhv += v[i] * (gp[i] - gm[i]) / (2.0 * eps);
    REQUIRE(vhv <= 1e-6);
  }
}

TEST_CASE("toy Gaussian closed forms") {
  const ToyGaussianModel m(1.5, 2.0, ParameterDomain::uniform(1, -10.0, 10.0));
  CHECK(m.posterior_var() == doctest::Approx(2.0 / 3.0));
  CHECK(m.posterior_mean(0.0) == doctest::Approx(1.0));
  // The marginal integrates the joint over x.
  const double theta = 0.4;
  double s = 0.0;
  const double dx = 1e-3;
  for (double x = -20.0; x <= 20.0; x += dx) s += std::exp(m.log_joint(Vector{x}, Vector{theta})) * dx;
  CHECK(std::log(s) == doctest::Approx(m.log_marginal(theta)).epsilon(1e-8));
}

TEST_CASE("audio gradients at simple points") {
  AudioProblem p = identity_problem(Vector{0.0, 0.0, 0.0}, 1.0, 0.5);
  Vector g(3);
  acs_grad_x(Vector{0.0, 0.0, 0.0}, 2.0, p, g);
  CHECK(g == Vector{0.0, 0.0, 0.0});

  // theta = 0 leaves only the least-squares term A^T (y - A x) / sigma^2.
  p = identity_problem(Vector{1.0, -2.0}, 0.5, 0.1);
  Vector g2(2);
  acs_grad_x(Vector{0.5, 0.0}, 0.0, p, g2);
  CHECK(g2[0] == doctest::Approx(2.0));
  CHECK(g2[1] == doctest::Approx(-8.0));
  CHECK_THROWS_AS(acs_grad_theta(Vector{0.0, 0.0}, 0.0, p), std::invalid_argument);
}

TEST_CASE("mse and theta_cs") {
  CHECK(mse(Vector{1.0, 2.0}, Vector{1.0, 2.0}) == 0.0);
  CHECK(mse(Vector{1.0, 1.0}, Vector{0.0, 0.0}) == 1.0);
  CHECK(theta_cs(identity_problem(Vector{0.0, 0.0}, 0.1, 0.1)) == 0.0);
  CHECK(theta_cs(identity_problem(Vector{0.3, -0.5}, 0.5, 0.1)) == doctest::Approx(0.1 * 0.5 / 0.25));
  CHECK_THROWS_AS(mse(Vector{1.0}, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("MAP with theta = 0 and identity operators returns y") {
  const Vector y{0.3, -1.2, 2.5, 0.0};
  const AudioProblem p = identity_problem(y, 1.0, 0.1);
  const MapResult r = map_reconstruct(p, 0.0);
  CHECK(r.converged);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(r.x_hat[i] - y[i]) < 1e-10);
}

TEST_CASE("one-dimensional MAP matches a grid search") {
  for (double y : {-1.3, 0.02, 0.8}) {
    for (double theta : {0.5, 4.0, 40.0}) {
      const AudioProblem p = identity_problem(Vector{y}, 0.5, 0.3);
      auto obj = [&](double x) { return (y - x) * (y - x) / (2.0 * 0.25) + theta * huber(x, 0.3); };
      // Successive refinement of a bracketing grid.
      double lo = -3.0, hi = 3.0, best = 0.0;
      for (int level = 0; level < 6; ++level) {
        const double step = (hi - lo) / 1000.0;
        double best_f = 1e300;
        for (int k = 0; k <= 1000; ++k) {
          const double x = lo + k * step;
          if (obj(x) < best_f) {
            best_f = obj(x);
            best = x;
          }
        }
        lo = best - 2.0 * step;
        hi = best + 2.0 * step;
      }
      const MapResult r = map_reconstruct(p, theta);
      CAPTURE(y);
      CAPTURE(theta);
      CHECK(std::abs(r.x_hat[0] - best) < 1e-6);
    }
  }
}

TEST_CASE("MAP objective trace is non-increasing") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> nd;
  AudioProblem p;
  p.sensing = Matrix(15, 30);
  for (auto& v : p.sensing.data()) v = nd(gen);
  p.observation.resize(15);
  for (auto& v : p.observation) v = nd(gen);
  p.sigma = 0.1;
  p.lambda = 1e-3;
  for (double theta : {1.0, 100.0, 1e4}) {
    const MapResult r = map_reconstruct(p, theta, MapOptions{2000, 1e-8});
    REQUIRE(!r.objective_trace.empty());
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      REQUIRE(r.objective_trace[k] <= r.objective_trace[k - 1]);
    }
    CHECK(map_objective(p, r.x_hat, theta) <= map_objective(p, Vector(30, 0.0), theta));
    CHECK(r.objective_trace.back() == doctest::Approx(map_objective(p, r.x_hat, theta)).epsilon(1e-12));
  }
}

TEST_CASE("dictionary atoms are unit norm and synthesize agrees with rows") {
  const SinusoidDictionary dict(400, 5, 4, 220.0);
  CHECK(dict.atoms() == 20);
  CHECK(dict.window() == 100);
  for (std::size_t j = 0; j < dict.atoms(); ++j) {
    double s = 0.0;
    for (std::size_t t = 0; t < 400; ++t) s += dict.value(t, j) * dict.value(t, j);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  Vector x(20, 0.0);
  x[3] = 1.5;
  x[17] = -0.5;
  const Vector z = dict.synthesize(x);
  const std::vector<std::size_t> idx{0, 57, 150, 399};
  const Matrix rows = dict.rows(idx);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    double v = 0.0;
    for (std::size_t j = 0; j < 20; ++j) v += rows(r, j) * x[j];
    CHECK(v == doctest::Approx(z[idx[r]]).epsilon(1e-12));
  }
}

TEST_CASE("random-effects gradient examples") {
  RandomEffectsProblem p;
  p.covariates = Matrix(1, 1, 1.0);
  p.loadings = Matrix(1, 1, 1.0);
  p.labels = {1.0};
  const Vector theta{0.0, 0.4};
  Vector gx(1), gt(2);
  re_grad_x(Vector{0.0}, theta, p, gx);
  CHECK(gx[0] == doctest::Approx(0.4 * 0.5));
  re_grad_theta(Vector{0.0}, theta, p, gt);
  CHECK(gt[0] == doctest::Approx(0.5));
  CHECK(gt[1] == 0.0);

  // sigma -> 0 with x = 0: prior-only stationary point.
  re_grad_x(Vector{0.0}, Vector{0.0, 0.0}, p, gx);
  CHECK(gx[0] == 0.0);
  re_grad_x(Vector{1.5}, Vector{0.0, 0.0}, p, gx);
  CHECK(gx[0] == -1.5);

  Vector pen(4);
  re_grad_penalty(Vector{0.0, 0.0, 0.0, 0.7}, 30.0, pen);
  CHECK(pen == Vector{0.0, 0.0, 0.0, 0.0});
  re_grad_penalty(Vector{40.0, -2.0, 0.0, 0.7}, 30.0, pen);
  CHECK(pen == Vector{30.0, -2.0, 0.0, 0.0});
}

TEST_CASE("random-effects conditioned model matches the free functions") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> nd;
  RandomEffectsProblem p;
  p.covariates = Matrix(12, 6);
  p.loadings = Matrix(12, 3);
  for (auto& v : p.covariates.data()) v = nd(gen);
  for (auto& v : p.loadings.data()) v = nd(gen);
  p.labels.resize(12);
  for (std::size_t i = 0; i < 12; ++i) p.labels[i] = i % 2;
  const RandomEffectsModel m(p);
  CHECK(m.domain().lower().back() == 1e-5);
  Vector theta(7);
  for (auto& t : theta) t = nd(gen);
  theta.back() = 0.3;
  const Vector x{0.1, -0.4, 0.9};
  const auto cond = m.condition(theta);
  Vector a(3), b(3), ta(7), tb(7);
  cond->grad_x_log_posterior(x, a);
  re_grad_x(x, theta, p, b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
  cond->grad_theta_log_joint(x, ta);
  re_grad_theta(x, theta, p, tb);
  for (std::size_t i = 0; i < 7; ++i) CHECK(ta[i] == doctest::Approx(tb[i]).epsilon(1e-13));
}

TEST_CASE("model input checks") {
  LogisticData bad;
  bad.covariates = Matrix(2, 1, 1.0);
  bad.labels = {0.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ToyGaussianModel(0.0, 0.0, ParameterDomain::uniform(1, -1.0, 1.0)), std::invalid_argument);
  AudioProblem p = identity_problem(Vector{1.0}, 1.0, 0.1);
  CHECK_THROWS_AS(AudioModel(p, ParameterDomain::uniform(1, 0.0, 10.0)), std::invalid_argument);
  Vector g(1);
  CHECK_THROWS_AS(acs_grad_x(Vector{std::nan("")}, 1.0, p, g), NonFiniteError);
}

}  // TEST_SUITE
