#include "soul/huber.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soul {

double huber(double u, double lambda) {
  const double a = std::abs(u);
  return a <= lambda ? 0.5 * u * u : lambda * (a - 0.5 * lambda);
}

double huber_grad(double u, double lambda) {
  if (std::abs(u) <= lambda) return u;
  return u > 0.0 ? lambda : -lambda;
}

double huber_sum(std::span<const double> u, double lambda) {
  double s = 0.0;
  for (double v : u) s += huber(v, lambda);
  return s;
}

double huber_prox(double v, double t, double lambda) {
  // Stationarity: x + t h'(x) = v. Inside the knee x = v / (1 + t).
  if (std::abs(v) <= lambda * (1.0 + t)) return v / (1.0 + t);
  return v > 0.0 ? v - t * lambda : v + t * lambda;
}

namespace {

struct NormalizerParts {
  double gaussian;  // integral over the quadratic zone
  double tail;      // exp(-theta lambda^2 / 2)
};

NormalizerParts normalizer_parts(double theta, double lambda) {
  if (!(theta > 0.0)) throw std::invalid_argument("huber normalizer: theta must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("huber normalizer: lambda must be positive");
  const double g = std::sqrt(2.0 * std::numbers::pi / theta) * std::erf(lambda * std::sqrt(0.5 * theta));
  return {g, std::exp(-0.5 * theta * lambda * lambda)};
}

}  // namespace

double huber_normalizer(double theta, double lambda) {
  const auto p = normalizer_parts(theta, lambda);
  return p.gaussian + 2.0 * p.tail / (theta * lambda);
}

double huber_normalizer_derivative(double theta, double lambda) {
  const auto p = normalizer_parts(theta, lambda);
  return -p.gaussian / (2.0 * theta) - 2.0 * p.tail / (theta * theta * lambda);
}

double huber_log_normalizer_derivative(double theta, double lambda) {
  const auto p = normalizer_parts(theta, lambda);
  const double z = p.gaussian + 2.0 * p.tail / (theta * lambda);
  const double dz = -p.gaussian / (2.0 * theta) - 2.0 * p.tail / (theta * theta * lambda);
  return dz / z;
}

}  // namespace soul
