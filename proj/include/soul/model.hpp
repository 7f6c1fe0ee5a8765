#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "soul/core.hpp"
#include "soul/kernel.hpp"

namespace soul {

class Model;

/// A model with theta held fixed. Models may cache theta-dependent work here
/// (e.g. fixed-effect logits) so repeated chain steps at one theta are cheap.
class ConditionedModel {
 public:
  virtual ~ConditionedModel() = default;
  virtual void grad_x_log_posterior(std::span<const double> x, std::span<double> out) const = 0;
  virtual void grad_theta_log_joint(std::span<const double> x, std::span<double> out) const = 0;
};

/// Latent-variable model p(x, y | theta) with penalty g(theta). The
/// observation y is owned by the model.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim_x() const = 0;
  virtual std::size_t dim_theta() const = 0;
  virtual const ParameterDomain& domain() const = 0;

  /// grad_x log p(x | y, theta)
  virtual void grad_x_log_posterior(std::span<const double> x, std::span<const double> theta,
                                    std::span<double> out) const = 0;
  /// grad_theta log p(x, y | theta)
  virtual void grad_theta_log_joint(std::span<const double> x, std::span<const double> theta,
                                    std::span<double> out) const = 0;
  /// grad g(theta); zero by default.
  virtual void grad_penalty(std::span<const double> theta, std::span<double> out) const;

  virtual bool has_log_joint() const { return false; }
  /// log p(x, y | theta) including normalizing constants.
  virtual double log_joint(std::span<const double> x, std::span<const double> theta) const;

  virtual std::unique_ptr<ConditionedModel> condition(std::span<const double> theta) const;

  /// grad_x log p(. | y, theta) as a free-standing function.
  GradientFn posterior_gradient(std::span<const double> theta) const;
};

}  // namespace soul
