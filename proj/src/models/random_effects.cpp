#include "soul/models/random_effects.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "soul/huber.hpp"
#include "soul/models/logistic.hpp"

namespace soul {

void RandomEffectsProblem::validate() const {
  if (covariates.rows() != labels.size() || loadings.rows() != labels.size()) {
    throw std::invalid_argument("RandomEffectsProblem: row count mismatch");
  }
  if (labels.empty() || covariates.cols() == 0 || loadings.cols() == 0) {
    throw std::invalid_argument("RandomEffectsProblem: empty");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("RandomEffectsProblem: lambda must be positive");
  if (!(sigma_floor > 0.0)) throw std::invalid_argument("RandomEffectsProblem: sigma_floor must be positive");
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw std::invalid_argument("RandomEffectsProblem: labels must be 0 or 1");
  }
}

namespace {

void check_inputs(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob) {
  if (x.size() != prob.dim()) throw std::invalid_argument("random_effects: latent has wrong dimension");
  if (theta.size() != prob.n_fixed() + 1) throw std::invalid_argument("random_effects: theta has wrong dimension");
  if (!all_finite(x) || !all_finite(theta)) throw NonFiniteError("random_effects: non-finite input");
}

// u = fixed + sigma Z x; returns Z x in zx.
void logits(const RandomEffectsProblem& prob, std::span<const double> fixed, double sigma, std::span<const double> x,
            Vector& zx, Vector& u) {
  zx.resize(prob.n_obs());
  u.resize(prob.n_obs());
  linalg::gemv(prob.loadings, x, zx);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = fixed[i] + sigma * zx[i];
}

void grad_x_from_fixed(const RandomEffectsProblem& prob, std::span<const double> fixed, double sigma,
                       std::span<const double> x, std::span<double> out) {
  Vector zx, r;
  logits(prob, fixed, sigma, x, zx, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = prob.labels[i] - sigmoid(r[i]);
  linalg::gemv_t(prob.loadings, r, out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = sigma * out[j] - x[j];
}

void grad_theta_from_fixed(const RandomEffectsProblem& prob, std::span<const double> fixed, double sigma,
                           std::span<const double> x, std::span<double> out) {
  Vector zx, r;
  logits(prob, fixed, sigma, x, zx, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = prob.labels[i] - sigmoid(r[i]);
  const std::size_t p = prob.n_fixed();
  linalg::gemv_t(prob.covariates, r, out.first(p));
  out[p] = linalg::dot(r, zx);
}

Vector fixed_logits(const RandomEffectsProblem& prob, std::span<const double> theta) {
  Vector fixed(prob.n_obs());
  linalg::gemv(prob.covariates, theta.first(prob.n_fixed()), fixed);
  return fixed;
}

class ConditionedRandomEffects final : public ConditionedModel {
 public:
  ConditionedRandomEffects(const RandomEffectsProblem& prob, std::span<const double> theta)
      : prob_(prob), fixed_(fixed_logits(prob, theta)), sigma_(theta[prob.n_fixed()]) {}

  void grad_x_log_posterior(std::span<const double> x, std::span<double> out) const override {
    if (!all_finite(x)) throw NonFiniteError("random_effects: non-finite latent");
    grad_x_from_fixed(prob_, fixed_, sigma_, x, out);
  }
  void grad_theta_log_joint(std::span<const double> x, std::span<double> out) const override {
    if (!all_finite(x)) throw NonFiniteError("random_effects: non-finite latent");
    grad_theta_from_fixed(prob_, fixed_, sigma_, x, out);
  }

 private:
  const RandomEffectsProblem& prob_;
  Vector fixed_;
  double sigma_;
};

}  // namespace

void re_grad_x(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob,
               std::span<double> out) {
  check_inputs(x, theta, prob);
  grad_x_from_fixed(prob, fixed_logits(prob, theta), theta[prob.n_fixed()], x, out);
}

void re_grad_theta(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob,
                   std::span<double> out) {
  check_inputs(x, theta, prob);
  grad_theta_from_fixed(prob, fixed_logits(prob, theta), theta[prob.n_fixed()], x, out);
}

void re_grad_penalty(std::span<const double> theta, double lambda, std::span<double> out) {
  if (theta.empty() || out.size() != theta.size()) throw std::invalid_argument("re_grad_penalty: size mismatch");
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) out[j] = huber_grad(theta[j], lambda);
  out[theta.size() - 1] = 0.0;
}

double re_log_joint(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob) {
  check_inputs(x, theta, prob);
  Vector zx, u;
  logits(prob, fixed_logits(prob, theta), theta[prob.n_fixed()], x, zx, u);
  double ll = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) ll += prob.labels[i] * u[i] - log1p_exp(u[i]);
  const double d = static_cast<double>(prob.dim());
  return ll - 0.5 * linalg::dot(x, x) - 0.5 * d * std::log(2.0 * std::numbers::pi);
}

RandomEffectsModel::RandomEffectsModel(RandomEffectsProblem problem) : prob_(std::move(problem)) {
  prob_.validate();
  Vector lower(prob_.n_fixed() + 1, -kInf);
  Vector upper(prob_.n_fixed() + 1, kInf);
  lower.back() = prob_.sigma_floor;
  domain_ = ParameterDomain(std::move(lower), std::move(upper));
}

void RandomEffectsModel::grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                                              std::span<double> out) const {
  re_grad_x(x, theta, prob_, out);
}

void RandomEffectsModel::grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                                              std::span<double> out) const {
  re_grad_theta(x, theta, prob_, out);
}

void RandomEffectsModel::grad_penalty(std::span<const double> theta, std::span<double> out) const {
  re_grad_penalty(theta, prob_.lambda, out);
}

double RandomEffectsModel::log_joint(std::span<const double> x, std::span<const double> theta) const {
  return re_log_joint(x, theta, prob_);
}

std::unique_ptr<ConditionedModel> RandomEffectsModel::condition(std::span<const double> theta) const {
  if (theta.size() != dim_theta()) throw std::invalid_argument("random_effects: theta has wrong dimension");
  if (!all_finite(theta)) throw NonFiniteError("random_effects: non-finite theta");
  return std::make_unique<ConditionedRandomEffects>(prob_, theta);
}

}  // namespace soul
