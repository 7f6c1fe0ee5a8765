#include "soul/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace soul {

namespace {

class DefaultConditioned final : public ConditionedModel {
 public:
  DefaultConditioned(const Model& model, std::span<const double> theta)
      : model_(model), theta_(theta.begin(), theta.end()) {}

  void grad_x_log_posterior(std::span<const double> x, std::span<double> out) const override {
    model_.grad_x_log_posterior(x, theta_, out);
  }
  void grad_theta_log_joint(std::span<const double> x, std::span<double> out) const override {
    model_.grad_theta_log_joint(x, theta_, out);
  }

 private:
  const Model& model_;
  Vector theta_;
};

}  // namespace

void Model::grad_penalty(std::span<const double> theta, std::span<double> out) const {
  if (theta.size() != out.size()) throw std::invalid_argument("grad_penalty: dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
}

double Model::log_joint(std::span<const double>, std::span<const double>) const {
  throw std::logic_error(name() + ": log_joint is not available for this model");
}

std::unique_ptr<ConditionedModel> Model::condition(std::span<const double> theta) const {
  return std::make_unique<DefaultConditioned>(*this, theta);
}

GradientFn Model::posterior_gradient(std::span<const double> theta) const {
  std::shared_ptr<const ConditionedModel> cond = condition(theta);
  return [cond](std::span<const double> x, std::span<double> out) { cond->grad_x_log_posterior(x, out); };
}

}  // namespace soul
