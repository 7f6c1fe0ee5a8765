#pragma once

#include <span>

#include "soul/core.hpp"
#include "soul/linalg.hpp"
#include "soul/model.hpp"

namespace soul {

/// Numerically stable logistic function e^u / (1 + e^u).
double sigmoid(double u);
/// Stable log(1 + e^u).
double log1p_exp(double u);

struct LogisticData {
  Matrix covariates;  ///< d_y x d, rows v_i (normalized, intercept included)
  Vector labels;      ///< y_i in {0, 1}
  double sigma2 = 5.0;

  std::size_t n_obs() const { return covariates.rows(); }
  std::size_t dim() const { return covariates.cols(); }
  void validate() const;
};

/// grad_beta log p(beta | y, theta) = sum_i (y_i - s(v_i'beta)) v_i - (beta - theta 1) / sigma^2
void blr_grad_x(std::span<const double> beta, double theta, const LogisticData& data, std::span<double> out);
/// d/dtheta log p(beta, y | theta) = <1, beta - theta 1> / sigma^2
double blr_grad_theta(std::span<const double> beta, double theta, const LogisticData& data);
/// log p(y | beta) + log N(beta; theta 1, sigma^2 I)
double blr_log_joint(std::span<const double> beta, double theta, const LogisticData& data);

/// Empirical Bayes logistic regression: beta ~ N(theta 1, sigma^2 I), scalar theta.
class LogisticRegressionModel final : public Model {
 public:
  LogisticRegressionModel(LogisticData data, ParameterDomain domain);

  std::string name() const override { return "blr"; }
  std::size_t dim_x() const override { return data_.dim(); }
  std::size_t dim_theta() const override { return 1; }
  const ParameterDomain& domain() const override { return domain_; }

  void grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  void grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                            std::span<double> out) const override;
  bool has_log_joint() const override { return true; }
  double log_joint(std::span<const double> x, std::span<const double> theta) const override;

  const LogisticData& data() const { return data_; }

 private:
  LogisticData data_;
  ParameterDomain domain_;
};

}  // namespace soul
