#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "soul/core.hpp"
#include "soul/model.hpp"

namespace soul {

using LogDensityFn = std::function<double(std::span<const double>)>;

struct ThmeEstimate {
  double log_phat = 0.0;
  std::size_t n_inside = 0;
  double radius = 0.0;
  double std_error = 0.0;  ///< batch-means standard error of log_phat
};

/// Truncated harmonic mean estimate of log p(y | theta) from posterior samples.
/// A is the ball around the sample mean holding `target_fraction` of the
/// samples; p_hat = n Vol(A) / sum_{k in A} 1 / p(x_k, y | theta).
ThmeEstimate thme(const std::vector<Vector>& samples, const LogDensityFn& log_joint,
                  double target_fraction = 0.4, std::size_t n_batches = 20);

/// Least-squares fit f ~ a2 x^2 + a1 x + a0.
struct QuadraticFit {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  std::optional<double> argmax() const;
};

QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> fs);

struct ThmeChainConfig {
  double gamma = 1e-3;
  std::size_t burnin = 1000;
  std::size_t n_samples = 10000;
  std::size_t thin = 1;
  double target_fraction = 0.4;
  std::uint64_t seed = 0;
  /// Drive every grid point with the same noise stream. The estimates then
  /// vary smoothly in theta, which steadies the quadratic fit; with false,
  /// grid point j uses stream j.
  bool common_noise = true;
};

struct ThmeScan {
  Vector theta_grid;
  Vector log_marginal;
  std::vector<std::size_t> n_inside;
  Vector radius;
  Vector std_error;
  QuadraticFit quad;
  std::optional<double> theta_star;  ///< absent when the fit is not concave
  std::size_t n_samples = 0;

  /// Root mean square of the per-point standard errors.
  double pooled_stderr() const;
};

/// For each grid value of a scalar theta, runs a ULA chain at fixed theta
/// from x0 (own burn-in), applies thme and fits a quadratic in theta to the
/// log-marginal estimates. Grid points run concurrently.
ThmeScan thme_scan(const Model& model, std::span<const double> theta_grid, std::span<const double> x0,
                   const ThmeChainConfig& chain);

}  // namespace soul
