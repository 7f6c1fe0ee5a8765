#include "soul/validation/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "soul/linalg.hpp"
#include "soul/optimizer.hpp"
#include "soul/rng.hpp"

namespace soul {

DriftConstants drift_constants(const TailParams& tail, double gamma_bar, std::size_t dim) {
  if (!(tail.m1 > 0.0) || !(tail.m2 > 0.0) || tail.c < 0.0 || tail.R1 < 0.0) {
    throw std::invalid_argument("drift_constants: invalid tail parameters");
  }
  const double d = static_cast<double>(dim);
  DriftConstants k;
  k.m1_tilde = tail.m1 / 4.0;
  k.lambda_e = std::exp(-k.m1_tilde * k.m1_tilde * (std::sqrt(2.0) - 1.0));
  k.r_e = std::max({1.0, 2.0 * (d + tail.c) / tail.m1, tail.R1});
  k.b_e = k.m1_tilde * (d + tail.c + std::sqrt(2.0) * k.m1_tilde) *
          std::exp(k.m1_tilde * ((d + tail.c + k.m1_tilde) * gamma_bar + std::sqrt(1.0 + k.r_e * k.r_e)));
  return k;
}

double lyapunov_ve(std::span<const double> x, double m1_tilde) {
  return std::exp(m1_tilde * std::sqrt(1.0 + linalg::dot(x, x)));
}

bool DriftReport::all_pass() const {
  return std::all_of(points.begin(), points.end(), [](const DriftPoint& p) { return p.pass; });
}

DriftReport drift_check(const GradientFn& grad_log_target, const TailParams& tail, double gamma,
                        const std::vector<Vector>& test_points, std::size_t n_mc, std::uint64_t seed,
                        double gamma_bar) {
  if (gamma_bar == 0.0) gamma_bar = gamma;
  const double cap = std::min(1.0, 2.0 * tail.m2);
  if (!(gamma > 0.0) || gamma > cap) {
    throw std::invalid_argument("drift_check: gamma must lie in (0, min(1, 2 m2)] = (0, " + std::to_string(cap) + "]");
  }
  if (gamma_bar < gamma || gamma_bar > cap) throw std::invalid_argument("drift_check: gamma_bar out of range");
  if (test_points.empty()) throw std::invalid_argument("drift_check: no test points");
  if (n_mc < 2) throw std::invalid_argument("drift_check: n_mc must be >= 2");

  const std::size_t dim = test_points.front().size();
  for (const auto& p : test_points) {
    if (p.size() != dim) throw std::invalid_argument("drift_check: test points have inconsistent dimension");
  }
  DriftReport report;
  report.tail = tail;
  report.gamma = gamma;
  report.gamma_bar = gamma_bar;
  report.constants = drift_constants(tail, gamma_bar, dim);
  report.points.resize(test_points.size());

  const auto count = static_cast<std::ptrdiff_t>(test_points.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const Vector& x = test_points[j];
    DriftPoint& pt = report.points[j];
    pt.x = x;
    pt.x_norm = linalg::norm2(x);
    Vector grad(x.size()), z(x.size()), next(x.size());
    grad_log_target(x, grad);
    RngStream rng(seed, static_cast<std::uint64_t>(j));
    // Welford accumulation of V_e over the one-step draws.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n_mc; ++k) {
      rng.fill_gaussian(z);
      next = x;
      ula_update(next, grad, gamma, z);
      const double v = lyapunov_ve(next, report.constants.m1_tilde);
      const double dv = v - mean;
      mean += dv / static_cast<double>(k + 1);
      m2 += dv * (v - mean);
    }
    pt.lhs = mean;
    pt.std_error = std::sqrt(m2 / static_cast<double>(n_mc - 1) / static_cast<double>(n_mc));
    const double inside = pt.x_norm < report.constants.r_e ? 1.0 : 0.0;
    pt.rhs = std::pow(report.constants.lambda_e, gamma) * lyapunov_ve(x, report.constants.m1_tilde) +
             report.constants.b_e * gamma * inside;
    pt.pass = pt.lhs <= pt.rhs + 3.0 * pt.std_error;
  }
  return report;
}

}  // namespace soul
