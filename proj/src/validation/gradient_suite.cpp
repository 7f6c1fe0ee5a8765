#include "soul/validation/gradient_suite.hpp"

#include <algorithm>
#include <cmath>

#include "soul/huber.hpp"
#include "soul/models/audio.hpp"
#include "soul/models/logistic.hpp"
#include "soul/models/random_effects.hpp"
#include "soul/rng.hpp"
#include "soul/validation/checks.hpp"

namespace soul {

namespace {

Matrix gaussian_matrix(std::size_t r, std::size_t c, double scale, RngStream& rng) {
  Matrix m(r, c);
  for (auto& v : m.data()) v = scale * rng.gaussian();
  return m;
}

Vector gaussian_vector(std::size_t n, double scale, RngStream& rng) {
  Vector v(n);
  for (auto& x : v) x = scale * rng.gaussian();
  return v;
}

Vector bernoulli_labels(std::size_t n, RngStream& rng) {
  Vector y(n);
  for (auto& v : y) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
  return y;
}

bool near_knee(std::span<const double> x, double lambda, double h) {
  const double margin = std::max(1e-4 * lambda, h);
  return std::any_of(x.begin(), x.end(), [&](double u) { return std::abs(std::abs(u) - lambda) <= margin; });
}

}  // namespace

std::vector<GradientCheckResult> gradient_suite(std::uint64_t seed, std::size_t n_points, double tolerance,
                                                double h) {
  RngStream rng(seed, 0);
  std::vector<GradientCheckResult> out;
  auto record = [&](const std::string& name, auto&& check_one) {
    GradientCheckResult r;
    r.name = name;
    while (r.points < n_points) {
      const double e = check_one();
      if (e < 0.0) continue;  // rejected point
      r.max_error = std::max(r.max_error, e);
      ++r.points;
    }
    r.pass = r.max_error < tolerance;
    out.push_back(r);
  };

  LogisticData blr;
  blr.covariates = gaussian_matrix(60, 6, 1.0, rng);
  blr.labels = bernoulli_labels(60, rng);
  blr.sigma2 = 5.0;
  record("blr_grad_x", [&] {
    const double theta = rng.gaussian();
    const Vector beta = gaussian_vector(blr.dim(), 1.0, rng);
    return gradcheck([&](std::span<const double> b) { return blr_log_joint(b, theta, blr); },
                     [&](std::span<const double> b, std::span<double> g) { blr_grad_x(b, theta, blr, g); }, beta, h);
  });
  record("blr_grad_theta", [&] {
    const Vector beta = gaussian_vector(blr.dim(), 1.0, rng);
    const Vector theta{rng.gaussian()};
    return gradcheck([&](std::span<const double> t) { return blr_log_joint(beta, t[0], blr); },
                     [&](std::span<const double> t, std::span<double> g) { g[0] = blr_grad_theta(beta, t[0], blr); },
                     theta, h);
  });

  for (double lambda : {0.1, 1.0}) {
    AudioProblem acs;
    acs.sensing = gaussian_matrix(15, 8, 0.5, rng);
    acs.observation = gaussian_vector(15, 1.0, rng);
    acs.sigma = 0.5;
    acs.lambda = lambda;
    const std::string tag = "(lambda=" + std::string(lambda == 0.1 ? "0.1" : "1") + ")";
    record("acs_grad_x " + tag, [&] {
      const double theta = 0.1 + 10.0 * rng.uniform();
      const Vector x = gaussian_vector(acs.dim(), 2.0 * lambda, rng);
      if (near_knee(x, lambda, h)) return -1.0;
      return gradcheck([&](std::span<const double> v) { return acs_log_joint(v, theta, acs); },
                       [&](std::span<const double> v, std::span<double> g) { acs_grad_x(v, theta, acs, g); }, x, h);
    });
    record("acs_grad_theta " + tag, [&] {
      const Vector x = gaussian_vector(acs.dim(), 2.0 * lambda, rng);
      const Vector theta{0.1 + 10.0 * rng.uniform()};
      return gradcheck([&](std::span<const double> t) { return acs_log_joint(x, t[0], acs); },
                       [&](std::span<const double> t, std::span<double> g) { g[0] = acs_grad_theta(x, t[0], acs); },
                       theta, h);
    });
  }

  RandomEffectsProblem re;
  re.covariates = gaussian_matrix(40, 6, 0.5, rng);
  re.loadings = gaussian_matrix(40, 3, 0.6, rng);
  re.labels = bernoulli_labels(40, rng);
  auto random_theta = [&] {
    Vector theta = gaussian_vector(re.n_fixed() + 1, 1.0, rng);
    theta.back() = 0.2 + 1.8 * rng.uniform();
    return theta;
  };
  record("re_grad_x", [&] {
    const Vector theta = random_theta();
    const Vector x = gaussian_vector(re.dim(), 1.0, rng);
    return gradcheck([&](std::span<const double> v) { return re_log_joint(v, theta, re); },
                     [&](std::span<const double> v, std::span<double> g) { re_grad_x(v, theta, re, g); }, x, h);
  });
  record("re_grad_theta", [&] {
    const Vector theta = random_theta();
    const Vector x = gaussian_vector(re.dim(), 1.0, rng);
    return gradcheck([&](std::span<const double> t) { return re_log_joint(x, t, re); },
                     [&](std::span<const double> t, std::span<double> g) { re_grad_theta(x, t, re, g); }, theta, h);
  });
  record("re_grad_penalty", [&] {
    const double lambda = 0.5;
    const Vector theta = random_theta();
    if (near_knee(std::span<const double>(theta).first(re.n_fixed()), lambda, h)) return -1.0;
    return gradcheck(
        [&](std::span<const double> t) { return huber_sum(t.first(t.size() - 1), lambda); },
        [&](std::span<const double> t, std::span<double> g) { re_grad_penalty(t, lambda, g); }, theta, h);
  });
  return out;
}

}  // namespace soul
