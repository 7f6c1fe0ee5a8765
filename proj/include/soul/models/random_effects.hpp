#pragma once

#include <memory>
#include <span>

#include "soul/core.hpp"
#include "soul/linalg.hpp"
#include "soul/model.hpp"

namespace soul {

/// Logistic regression with fixed effects beta (p) and a scaled random
/// effect sigma * z_i' x, x ~ N(0, I_d). theta = (beta_1..beta_p, sigma).
struct RandomEffectsProblem {
  Matrix covariates;  ///< d_y x p, rows v_i
  Matrix loadings;    ///< d_y x d, rows z_i
  Vector labels;      ///< y_i in {0, 1}
  double lambda = 30.0;
  double sigma_floor = 1e-5;

  std::size_t n_obs() const { return covariates.rows(); }
  std::size_t n_fixed() const { return covariates.cols(); }
  std::size_t dim() const { return loadings.cols(); }
  void validate() const;
};

/// sum_i sigma z_i (y_i - s(v_i'beta + sigma z_i'x)) - x
void re_grad_x(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob,
               std::span<double> out);
/// sum_i (y_i - s(v_i'beta + sigma z_i'x)) [v_i; z_i'x]
void re_grad_theta(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob,
                   std::span<double> out);
/// (h'_lambda(beta_1), ..., h'_lambda(beta_p), 0)
void re_grad_penalty(std::span<const double> theta, double lambda, std::span<double> out);
/// log p(y | x, theta) + log N(x; 0, I)
double re_log_joint(std::span<const double> x, std::span<const double> theta, const RandomEffectsProblem& prob);

class RandomEffectsModel final : public Model {
 public:
  explicit RandomEffectsModel(RandomEffectsProblem problem);

  std::string name() const override { return "random_effects"; }
  std::size_t dim_x() const override { return prob_.dim(); }
  std::size_t dim_theta() const override { return prob_.n_fixed() + 1; }
  const ParameterDomain& domain() const override { return domain_; }

  void grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  void grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  void grad_penalty(std::span<const double> theta, std::span<double> out) const override;
  bool has_log_joint() const override { return true; }
  double log_joint(std::span<const double> x, std::span<const double> theta) const override;

  /// Caches the fixed-effect logits V beta, so chain steps cost O(d_y d).
  std::unique_ptr<ConditionedModel> condition(std::span<const double> theta) const override;

  const RandomEffectsProblem& problem() const { return prob_; }

 private:
  RandomEffectsProblem prob_;
  ParameterDomain domain_;
};

}  // namespace soul
