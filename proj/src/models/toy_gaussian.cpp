#include "soul/models/toy_gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soul {

namespace {

double log_normal_pdf(double v, double mean, double var) {
  const double r = v - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
}

}  // namespace

ToyGaussianModel::ToyGaussianModel(double y, double prior_var, ParameterDomain domain)
    : y_(y), prior_var_(prior_var), domain_(std::move(domain)) {
  if (!(prior_var > 0.0)) throw std::invalid_argument("ToyGaussianModel: prior_var must be positive");
  if (domain_.dim() != 1) throw std::invalid_argument("ToyGaussianModel: theta is scalar");
}

void ToyGaussianModel::grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                                            std::span<double> out) const {
  out[0] = -(x[0] - theta[0]) / prior_var_ + (y_ - x[0]);
}

void ToyGaussianModel::grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                                            std::span<double> out) const {
  out[0] = (x[0] - theta[0]) / prior_var_;
}

double ToyGaussianModel::log_joint(std::span<const double> x, std::span<const double> theta) const {
  return log_normal_pdf(x[0], theta[0], prior_var_) + log_normal_pdf(y_, x[0], 1.0);
}

double ToyGaussianModel::log_marginal(double theta) const { return log_normal_pdf(y_, theta, 1.0 + prior_var_); }

double ToyGaussianModel::posterior_var() const { return prior_var_ / (1.0 + prior_var_); }

double ToyGaussianModel::posterior_mean(double theta) const {
  return posterior_var() * (theta / prior_var_ + y_);
}

}  // namespace soul
