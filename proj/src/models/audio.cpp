#include "soul/models/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "soul/huber.hpp"

namespace soul {

SinusoidDictionary::SinusoidDictionary(std::size_t ell, std::size_t n_notes, std::size_t n_positions,
                                       double base_hz, double window_seconds)
    : ell_(ell), n_notes_(n_notes), n_positions_(n_positions), base_hz_(base_hz) {
  if (n_notes == 0 || n_positions == 0) throw std::invalid_argument("SinusoidDictionary: empty dictionary");
  if (n_notes * n_positions > ell) throw std::invalid_argument("SinusoidDictionary: more atoms than samples");
  if (!(base_hz > 0.0) || !(window_seconds > 0.0)) throw std::invalid_argument("SinusoidDictionary: bad frequency");
  window_ = ell / n_positions;
  sample_rate_ = static_cast<double>(window_) / window_seconds;
  inv_norms_.resize(n_notes);
  for (std::size_t k = 0; k < n_notes; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t < window_; ++t) s += raw(t, k) * raw(t, k);
    if (!(s > 0.0)) throw std::invalid_argument("SinusoidDictionary: degenerate atom");
    inv_norms_[k] = 1.0 / std::sqrt(s);
  }
}

double SinusoidDictionary::raw(std::size_t offset, std::size_t note) const {
  const double L = static_cast<double>(window_);
  const double t = static_cast<double>(offset);
  const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (t + 0.5) / L);
  const double f = base_hz_ * std::exp2(static_cast<double>(note) / 12.0);
  return w * std::sin(2.0 * std::numbers::pi * f * t / sample_rate_);
}

double SinusoidDictionary::value(std::size_t s, std::size_t j) const {
  const std::size_t pos = j / n_notes_;
  const std::size_t note = j % n_notes_;
  const std::size_t start = pos * window_;
  if (s < start || s >= start + window_) return 0.0;
  return raw(s - start, note) * inv_norms_[note];
}

Vector SinusoidDictionary::synthesize(std::span<const double> x) const {
  if (x.size() != atoms()) throw std::invalid_argument("synthesize: wrong latent dimension");
  Vector z(ell_, 0.0);
  for (std::size_t pos = 0; pos < n_positions_; ++pos) {
    const std::size_t start = pos * window_;
    for (std::size_t note = 0; note < n_notes_; ++note) {
      const double c = x[pos * n_notes_ + note];
      if (c == 0.0) continue;
      const double scale = c * inv_norms_[note];
      for (std::size_t t = 0; t < window_; ++t) z[start + t] += scale * raw(t, note);
    }
  }
  return z;
}

Matrix SinusoidDictionary::rows(std::span<const std::size_t> samples) const {
  Matrix out(samples.size(), atoms(), 0.0);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const std::size_t s = samples[r];
    if (s >= ell_) throw std::invalid_argument("SinusoidDictionary: sample index out of range");
    const std::size_t pos = s / window_;
    if (pos >= n_positions_) continue;  // tail samples not covered by any window
    const std::size_t offset = s - pos * window_;
    for (std::size_t note = 0; note < n_notes_; ++note) {
      out(r, pos * n_notes_ + note) = raw(offset, note) * inv_norms_[note];
    }
  }
  return out;
}

void AudioProblem::validate() const {
  if (sensing.rows() != observation.size()) throw std::invalid_argument("AudioProblem: observation size mismatch");
  if (sensing.empty()) throw std::invalid_argument("AudioProblem: empty sensing matrix");
  if (!(sigma > 0.0)) throw std::invalid_argument("AudioProblem: sigma must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("AudioProblem: lambda must be positive");
}

namespace {

void residual(const AudioProblem& prob, std::span<const double> x, std::span<double> r) {
  linalg::gemv(prob.sensing, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = prob.observation[i] - r[i];
}

void check_x(std::span<const double> x, double theta, const AudioProblem& prob) {
  if (x.size() != prob.dim()) throw std::invalid_argument("audio: latent has wrong dimension");
  if (!std::isfinite(theta) || !all_finite(x)) throw NonFiniteError("audio: non-finite input");
}

}  // namespace

void acs_grad_x(std::span<const double> x, double theta, const AudioProblem& prob, std::span<double> out) {
  check_x(x, theta, prob);
  Vector r(prob.n_measurements());
  residual(prob, x, r);
  linalg::gemv_t(prob.sensing, r, out);
  const double inv_s2 = 1.0 / (prob.sigma * prob.sigma);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * inv_s2 - theta * huber_grad(x[i], prob.lambda);
}

double acs_grad_theta(std::span<const double> x, double theta, const AudioProblem& prob) {
  check_x(x, theta, prob);
  if (!(theta > 0.0)) throw std::invalid_argument("acs_grad_theta: theta must be positive");
  const double d = static_cast<double>(prob.dim());
  return -huber_sum(x, prob.lambda) - d * huber_log_normalizer_derivative(theta, prob.lambda);
}

double acs_log_joint(std::span<const double> x, double theta, const AudioProblem& prob) {
  check_x(x, theta, prob);
  Vector r(prob.n_measurements());
  residual(prob, x, r);
  const double s2 = prob.sigma * prob.sigma;
  const double p = static_cast<double>(prob.n_measurements());
  const double d = static_cast<double>(prob.dim());
  const double loglik = -linalg::dot(r, r) / (2.0 * s2) - 0.5 * p * std::log(2.0 * std::numbers::pi * s2);
  const double logprior = -theta * huber_sum(x, prob.lambda) - d * std::log(huber_normalizer(theta, prob.lambda));
  return loglik + logprior;
}

double theta_cs(const AudioProblem& prob) {
  Vector g(prob.dim());
  linalg::gemv_t(prob.sensing, prob.observation, g);
  return 0.1 * linalg::norm_inf(g) / (prob.sigma * prob.sigma);
}

double mse(std::span<const double> z_true, std::span<const double> z_hat) {
  if (z_true.size() != z_hat.size()) throw std::invalid_argument("mse: length mismatch");
  if (z_true.empty()) throw std::invalid_argument("mse: empty signal");
  double s = 0.0;
  for (std::size_t i = 0; i < z_true.size(); ++i) s += (z_true[i] - z_hat[i]) * (z_true[i] - z_hat[i]);
  return s / static_cast<double>(z_true.size());
}

double map_objective(const AudioProblem& prob, std::span<const double> x, double theta) {
  Vector r(prob.n_measurements());
  residual(prob, x, r);
  return linalg::dot(r, r) / (2.0 * prob.sigma * prob.sigma) + theta * huber_sum(x, prob.lambda);
}

MapResult map_reconstruct(const AudioProblem& prob, double theta, const MapOptions& options) {
  prob.validate();
  if (!(theta >= 0.0)) throw std::invalid_argument("map_reconstruct: theta must be >= 0");
  const std::size_t d = prob.dim();
  const std::size_t p = prob.n_measurements();
  const double inv_s2 = 1.0 / (prob.sigma * prob.sigma);

  Vector aty(d);
  linalg::gemv_t(prob.sensing, prob.observation, aty);
  const double scale = 1.0 + linalg::norm2(aty) * inv_s2;

  double lipschitz = linalg::spectral_norm_sq(prob.sensing, 50) * inv_s2;
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  // Smooth part f(x) = ||y - A x||^2 / (2 sigma^2) and its gradient.
  Vector r(p);
  auto smooth = [&](std::span<const double> x, std::span<double> grad) {
    residual(prob, x, r);
    linalg::gemv_t(prob.sensing, r, grad);
    for (auto& g : grad) g *= -inv_s2;
    return 0.5 * linalg::dot(r, r) * inv_s2;
  };
  auto smooth_value = [&](std::span<const double> x) {
    residual(prob, x, r);
    return 0.5 * linalg::dot(r, r) * inv_s2;
  };

  MapResult out;
  Vector x(d, 0.0), x_prev(d, 0.0), y(d, 0.0), z(d), grad(d);
  double fx = smooth_value(x) + theta * huber_sum(x, prob.lambda);
  double momentum = 1.0;

  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const double fy = smooth(y, grad);
    double fz = 0.0;
    // Backtrack until the quadratic upper bound holds at the prox point.
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < d; ++i) z[i] = huber_prox(y[i] - step * grad[i], step * theta, prob.lambda);
      fz = smooth_value(z);
      double lin = 0.0, quad = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double dz = z[i] - y[i];
        lin += grad[i] * dz;
        quad += dz * dz;
      }
      if (fz <= fy + lin + quad / (2.0 * step) + 1e-12 * std::abs(fy)) break;
      step *= 0.5;
    }
    double mapping = 0.0;
    for (std::size_t i = 0; i < d; ++i) mapping += (z[i] - y[i]) * (z[i] - y[i]);
    mapping = std::sqrt(mapping) / step;

    const double Fz = fz + theta * huber_sum(z, prob.lambda);
    x_prev = x;
    if (Fz <= fx) {
      x = z;
      fx = Fz;
    }
    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    for (std::size_t i = 0; i < d; ++i) {
      y[i] = x[i] + (momentum / next) * (z[i] - x[i]) + ((momentum - 1.0) / next) * (x[i] - x_prev[i]);
    }
    momentum = next;
    out.objective_trace.push_back(fx);
    out.iterations = it + 1;
    if (mapping <= options.tol * scale) {
      out.converged = true;
      break;
    }
  }
  out.x_hat = std::move(x);
  return out;
}

AudioModel::AudioModel(AudioProblem problem, ParameterDomain domain)
    : prob_(std::move(problem)), domain_(std::move(domain)) {
  prob_.validate();
  if (domain_.dim() != 1) throw std::invalid_argument("AudioModel: theta is scalar");
  if (!(domain_.lower()[0] > 0.0)) throw std::invalid_argument("AudioModel: theta domain must be positive");
}

void AudioModel::grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                                      std::span<double> out) const {
  acs_grad_x(x, theta[0], prob_, out);
}

void AudioModel::grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                                      std::span<double> out) const {
  out[0] = acs_grad_theta(x, theta[0], prob_);
}

double AudioModel::log_joint(std::span<const double> x, std::span<const double> theta) const {
  return acs_log_joint(x, theta[0], prob_);
}

}  // namespace soul
