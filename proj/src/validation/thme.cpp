#include "soul/validation/thme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "soul/kernel.hpp"
#include "soul/linalg.hpp"
#include "soul/optimizer.hpp"
#include "soul/rng.hpp"

namespace soul {

namespace {

double log_ball_volume(std::size_t d, double r) {
  const double dd = static_cast<double>(d);
  return 0.5 * dd * std::log(std::numbers::pi) + dd * std::log(r) - std::lgamma(0.5 * dd + 1.0);
}

double log_sum_exp(std::span<const double> v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

ThmeEstimate thme(const std::vector<Vector>& samples, const LogDensityFn& log_joint, double target_fraction,
                  std::size_t n_batches) {
  const std::size_t n = samples.size();
  if (n < 50) throw std::invalid_argument("thme: need at least 50 samples");
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw std::invalid_argument("thme: target_fraction must lie in (0, 1)");
  }
  const std::size_t d = samples.front().size();
  Vector center(d, 0.0);
  for (const auto& s : samples) {
    if (s.size() != d) throw std::invalid_argument("thme: samples have inconsistent dimension");
    for (std::size_t i = 0; i < d; ++i) center[i] += s[i];
  }
  for (auto& c : center) c /= static_cast<double>(n);

  Vector dist(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += (samples[k][i] - center[i]) * (samples[k][i] - center[i]);
    dist[k] = std::sqrt(s);
  }
  Vector sorted = dist;
  const auto idx = static_cast<std::size_t>(std::ceil(target_fraction * static_cast<double>(n))) - 1;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(idx), sorted.end());
  const double radius = sorted[idx];
  if (!(radius > 0.0)) throw std::invalid_argument("thme: degenerate sample cloud");

  // Inverse joint densities of the inside samples, on the log scale. Outside
  // samples contribute -inf.
  Vector neg_lj(n, -kInf);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (dist[k] > radius) continue;
    const double lj = log_joint(samples[k]);
    if (!std::isfinite(lj)) throw NonFiniteError("thme: non-finite log joint on a sample");
    neg_lj[k] = -lj;
    ++inside;
  }
  if (inside == 0) throw std::invalid_argument("thme: no samples inside the ball");

  ThmeEstimate out;
  out.radius = radius;
  out.n_inside = inside;
  const double lse = log_sum_exp(neg_lj);
  out.log_phat = std::log(static_cast<double>(n)) + log_ball_volume(d, radius) - lse;

  // Delta method on log(mean w), with w_k = 1_A(x_k) / p(x_k, y | theta)
  // scaled by exp(-lse); batch means absorb chain autocorrelation.
  const std::size_t nb = std::max<std::size_t>(2, std::min(n_batches, n / 10));
  const std::size_t len = n / nb;
  Vector means(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t k = b * len; k < (b + 1) * len; ++k) means[b] += std::exp(neg_lj[k] - lse);
    means[b] /= static_cast<double>(len);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= static_cast<double>(nb);
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= static_cast<double>(nb - 1);
  out.std_error = mu > 0.0 ? std::sqrt(var / static_cast<double>(nb)) / mu : kInf;
  return out;
}

std::optional<double> QuadraticFit::argmax() const {
  if (!(a2 < 0.0)) return std::nullopt;
  return -a1 / (2.0 * a2);
}

QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> fs) {
  if (xs.size() != fs.size()) throw std::invalid_argument("fit_quadratic: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("fit_quadratic: need at least 3 points");
  // Centre and scale x for conditioning, solve the 3x3 normal equations, then
  // map the coefficients back.
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(x - mean));
  if (!(scale > 0.0)) throw std::invalid_argument("fit_quadratic: all abscissae coincide");

  double S[5] = {0, 0, 0, 0, 0};
  double T[3] = {0, 0, 0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double t = (xs[i] - mean) / scale;
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      S[k] += p;
      if (k < 3) T[k] += p * fs[i];
      p *= t;
    }
  }
  // Rows: [S0 S1 S2; S1 S2 S3; S2 S3 S4] c = T, c = (c0, c1, c2).
  double A[3][4] = {{S[0], S[1], S[2], T[0]}, {S[1], S[2], S[3], T[1]}, {S[2], S[3], S[4], T[2]}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (A[piv][col] == 0.0) throw std::invalid_argument("fit_quadratic: singular design");
    for (int k = 0; k < 4; ++k) std::swap(A[col][k], A[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
    }
  }
  const double c0 = A[0][3] / A[0][0];
  const double c1 = A[1][3] / A[1][1];
  const double c2 = A[2][3] / A[2][2];
  // f = c0 + c1 (x - m)/s + c2 (x - m)^2/s^2
  QuadraticFit q;
  q.a2 = c2 / (scale * scale);
  q.a1 = c1 / scale - 2.0 * c2 * mean / (scale * scale);
  q.a0 = c0 - c1 * mean / scale + c2 * mean * mean / (scale * scale);
  return q;
}

double ThmeScan::pooled_stderr() const {
  if (std_error.empty()) return 0.0;
  double s = 0.0;
  for (double e : std_error) s += e * e;
  return std::sqrt(s / static_cast<double>(std_error.size()));
}

ThmeScan thme_scan(const Model& model, std::span<const double> theta_grid, std::span<const double> x0,
                   const ThmeChainConfig& chain) {
  if (model.dim_theta() != 1) throw std::invalid_argument("thme_scan: theta must be scalar");
  if (!model.has_log_joint()) throw std::invalid_argument("thme_scan: model has no log joint");
  if (theta_grid.size() < 5) throw std::invalid_argument("thme_scan: need at least 5 grid points");
  if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) throw std::invalid_argument("thme_scan: grid not sorted");
  if (chain.n_samples < 50 || chain.thin < 1) throw std::invalid_argument("thme_scan: bad chain configuration");
  if (x0.size() != model.dim_x()) throw std::invalid_argument("thme_scan: x0 has wrong dimension");

  const std::size_t g = theta_grid.size();
  ThmeScan scan;
  scan.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  scan.log_marginal.assign(g, 0.0);
  scan.n_inside.assign(g, 0);
  scan.radius.assign(g, 0.0);
  scan.std_error.assign(g, 0.0);
  scan.n_samples = chain.n_samples;

  std::vector<std::string> errors(g);
  const auto count = static_cast<std::ptrdiff_t>(g);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      const Vector theta{theta_grid[j]};
      const GradientFn grad = model.posterior_gradient(theta);
      RngStream rng(chain.seed, chain.common_noise ? 0 : static_cast<std::uint64_t>(j));
      UlaChain ula(Vector(x0.begin(), x0.end()));
      for (std::size_t k = 0; k < chain.burnin; ++k) ula.step(grad, chain.gamma, rng);
      std::vector<Vector> samples;
      samples.reserve(chain.n_samples);
      for (std::size_t k = 0; k < chain.n_samples; ++k) {
        for (std::size_t t = 0; t < chain.thin; ++t) ula.step(grad, chain.gamma, rng);
        samples.emplace_back(ula.state().begin(), ula.state().end());
      }
      const ThmeEstimate est = thme(
          samples, [&](std::span<const double> x) { return model.log_joint(x, theta); }, chain.target_fraction);
      scan.log_marginal[j] = est.log_phat;
      scan.n_inside[j] = est.n_inside;
      scan.radius[j] = est.radius;
      scan.std_error[j] = est.std_error;
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }
  for (std::size_t j = 0; j < g; ++j) {
    if (!errors[j].empty()) {
      throw std::runtime_error("thme_scan: grid point " + std::to_string(j) + ": " + errors[j]);
    }
  }
  scan.quad = fit_quadratic(scan.theta_grid, scan.log_marginal);
  scan.theta_star = scan.quad.argmax();
  return scan;
}

}  // namespace soul
