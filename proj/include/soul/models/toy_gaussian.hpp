#pragma once

#include "soul/model.hpp"

namespace soul {

/// Conjugate toy: x | theta ~ N(theta, prior_var), y | x ~ N(x, 1).
/// The marginal y | theta ~ N(theta, 1 + prior_var) is maximized at theta = y.
class ToyGaussianModel final : public Model {
 public:
  ToyGaussianModel(double y, double prior_var, ParameterDomain domain);

  std::string name() const override { return "toy_gaussian"; }
  std::size_t dim_x() const override { return 1; }
  std::size_t dim_theta() const override { return 1; }
  const ParameterDomain& domain() const override { return domain_; }

  void grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  void grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  bool has_log_joint() const override { return true; }
  double log_joint(std::span<const double> x, std::span<const double> theta) const override;

  double observation() const { return y_; }
  double prior_var() const { return prior_var_; }

  /// log N(y; theta, 1 + prior_var)
  double log_marginal(double theta) const;
  double posterior_mean(double theta) const;
  double posterior_var() const;

 private:
  double y_;
  double prior_var_;
  ParameterDomain domain_;
};

}  // namespace soul
