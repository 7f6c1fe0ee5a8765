#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "soul/core.hpp"
#include "soul/linalg.hpp"
#include "soul/model.hpp"

namespace soul {

/// Dictionary of Hann-windowed sinusoids ("notes"). The signal of length ell
/// is tiled by n_positions windows; atom (position t, note k) is a unit-norm
/// sinusoid at base_hz * 2^(k/12) living on window t. Column index is
/// t * n_notes + k. Atoms are evaluated on demand, so full-scale signals
/// never materialize the ell x d matrix.
class SinusoidDictionary {
 public:
  SinusoidDictionary() = default;
  SinusoidDictionary(std::size_t ell, std::size_t n_notes, std::size_t n_positions, double base_hz,
                     double window_seconds = 0.25);

  std::size_t signal_length() const { return ell_; }
  std::size_t atoms() const { return n_notes_ * n_positions_; }
  std::size_t window() const { return window_; }
  double sample_rate() const { return sample_rate_; }

  /// Psi(s, j)
  double value(std::size_t s, std::size_t j) const;
  /// z = Psi x
  Vector synthesize(std::span<const double> x) const;
  /// Rows of Psi at the given sample indices (M Psi for a row-selector M).
  Matrix rows(std::span<const std::size_t> samples) const;

 private:
  double raw(std::size_t offset, std::size_t note) const;

  std::size_t ell_ = 0;
  std::size_t n_notes_ = 0;
  std::size_t n_positions_ = 0;
  std::size_t window_ = 0;
  double base_hz_ = 0.0;
  double sample_rate_ = 0.0;
  Vector inv_norms_;
};

/// Compressive-sensing observation y = M Psi x + N(0, sigma^2 I) with a
/// smoothed-Laplace prior exp(-theta sum h_lambda(x_i)) on the latent x.
struct AudioProblem {
  Matrix sensing;                                 ///< M Psi, p x d
  Vector observation;                             ///< y, length p
  double sigma = 0.015;
  double lambda = 4e-5;
  std::vector<std::size_t> sample_times;          ///< rows selected by M
  std::optional<SinusoidDictionary> dictionary;   ///< Psi, when known
  Vector truth;                                   ///< z* (empty if unknown)
  Vector x_true;                                  ///< latent truth (empty if unknown)

  std::size_t dim() const { return sensing.cols(); }
  std::size_t n_measurements() const { return sensing.rows(); }
  void validate() const;
};

/// grad_x log p(x | y, theta) = A^T (y - A x) / sigma^2 - theta h'_lambda(x)
void acs_grad_x(std::span<const double> x, double theta, const AudioProblem& prob, std::span<double> out);
/// d/dtheta log p(x, y | theta) = -sum h_lambda(x_i) - d z'(theta) / z(theta)
double acs_grad_theta(std::span<const double> x, double theta, const AudioProblem& prob);
/// log p(y | x) + log p(x | theta), both normalized.
double acs_log_joint(std::span<const double> x, double theta, const AudioProblem& prob);

/// 0.1 ||(M Psi)^T y||_inf / sigma^2
double theta_cs(const AudioProblem& prob);

/// ||z_true - z_hat||^2 / ell
double mse(std::span<const double> z_true, std::span<const double> z_hat);

/// MAP objective ||y - A x||^2 / (2 sigma^2) + theta sum h_lambda(x_i).
double map_objective(const AudioProblem& prob, std::span<const double> x, double theta);

struct MapOptions {
  std::size_t max_iter = 5000;
  double tol = 1e-8;  ///< on the gradient-mapping norm, relative to 1 + ||A^T y|| / sigma^2
};

struct MapResult {
  Vector x_hat;
  Vector objective_trace;  ///< one entry per iteration, non-increasing
  std::size_t iterations = 0;
  bool converged = false;
};

/// Minimizes map_objective by monotone accelerated proximal gradient: the
/// least-squares term takes gradient steps (backtracking from 1/L), the Huber
/// term its exact prox.
MapResult map_reconstruct(const AudioProblem& prob, double theta, const MapOptions& options = {});

class AudioModel final : public Model {
 public:
  AudioModel(AudioProblem problem, ParameterDomain domain);

  std::string name() const override { return "audio"; }
  std::size_t dim_x() const override { return prob_.dim(); }
  std::size_t dim_theta() const override { return 1; }
  const ParameterDomain& domain() const override { return domain_; }

  void grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  void grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  bool has_log_joint() const override { return true; }
  double log_joint(std::span<const double> x, std::span<const double> theta) const override;

  const AudioProblem& problem() const { return prob_; }

 private:
  AudioProblem prob_;
  ParameterDomain domain_;
};

}  // namespace soul
