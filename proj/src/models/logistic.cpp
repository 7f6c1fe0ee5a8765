#include "soul/models/logistic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soul {

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double log1p_exp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

void LogisticData::validate() const {
  if (covariates.rows() != labels.size()) throw std::invalid_argument("LogisticData: label count mismatch");
  if (covariates.rows() == 0 || covariates.cols() == 0) throw std::invalid_argument("LogisticData: empty");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("LogisticData: sigma2 must be positive");
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw std::invalid_argument("LogisticData: labels must be 0 or 1");
  }
  if (!all_finite(covariates.data())) throw std::invalid_argument("LogisticData: non-finite covariate");
}

namespace {

void check_beta(std::span<const double> beta, double theta, const LogisticData& data) {
  if (beta.size() != data.dim()) throw std::invalid_argument("blr: beta has wrong dimension");
  if (!std::isfinite(theta) || !all_finite(beta)) throw NonFiniteError("blr: non-finite input");
}

}  // namespace

void blr_grad_x(std::span<const double> beta, double theta, const LogisticData& data, std::span<double> out) {
  check_beta(beta, theta, data);
  if (out.size() != data.dim()) throw std::invalid_argument("blr_grad_x: output has wrong dimension");
  Vector resid(data.n_obs());
  linalg::gemv(data.covariates, beta, resid);
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = data.labels[i] - sigmoid(resid[i]);
  linalg::gemv_t(data.covariates, resid, out);
  const double inv_s2 = 1.0 / data.sigma2;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= (beta[j] - theta) * inv_s2;
}

double blr_grad_theta(std::span<const double> beta, double theta, const LogisticData& data) {
  check_beta(beta, theta, data);
  double s = 0.0;
  for (double b : beta) s += b - theta;
  return s / data.sigma2;
}

double blr_log_joint(std::span<const double> beta, double theta, const LogisticData& data) {
  check_beta(beta, theta, data);
  Vector u(data.n_obs());
  linalg::gemv(data.covariates, beta, u);
  double ll = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) ll += data.labels[i] * u[i] - log1p_exp(u[i]);
  double sq = 0.0;
  for (double b : beta) sq += (b - theta) * (b - theta);
  const double d = static_cast<double>(data.dim());
  return ll - sq / (2.0 * data.sigma2) - 0.5 * d * std::log(2.0 * std::numbers::pi * data.sigma2);
}

LogisticRegressionModel::LogisticRegressionModel(LogisticData data, ParameterDomain domain)
    : data_(std::move(data)), domain_(std::move(domain)) {
  data_.validate();
  if (domain_.dim() != 1) throw std::invalid_argument("LogisticRegressionModel: theta is scalar");
}

void LogisticRegressionModel::grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                                                   std::span<double> out) const {
  blr_grad_x(x, theta[0], data_, out);
}

void LogisticRegressionModel::grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                                                   std::span<double> out) const {
  out[0] = blr_grad_theta(x, theta[0], data_);
}

double LogisticRegressionModel::log_joint(std::span<const double> x, std::span<const double> theta) const {
  return blr_log_joint(x, theta[0], data_);
}

}  // namespace soul
