#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "soul/core.hpp"
#include "soul/rng.hpp"

namespace soul {

/// Writes grad_x log pi(x) into `out` (same length as x).
using GradientFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// One unadjusted Langevin move with a supplied noise vector:
///   x <- x + gamma * grad + sqrt(2 gamma) * z.
/// gamma = 0 is accepted here and leaves x unchanged.
void ula_update(std::span<double> x, std::span<const double> grad, double gamma,
                std::span<const double> z);

/// One ULA step targeting pi (ascent on log pi). Consumes exactly x.size()
/// Gaussian draws. Throws NonFiniteError if the gradient or the new state is
/// not finite.
Vector ula_step(std::span<const double> x, const GradientFn& grad_log_target, double gamma,
                RngStream& rng);

/// In-place Langevin chain with reusable buffers.
class UlaChain {
 public:
  explicit UlaChain(Vector x0);

  void step(const GradientFn& grad_log_target, double gamma, RngStream& rng);

  std::span<const double> state() const { return x_; }
  std::span<double> mutable_state() { return x_; }
  std::size_t dim() const { return x_.size(); }

 private:
  Vector x_;
  Vector grad_;
  Vector noise_;
};

struct ChainResult {
  std::vector<Vector> samples;
  Vector final;
};

/// Runs m ULA steps from x0; samples[k] is the state after k + 1 steps.
ChainResult run_chain(std::span<const double> x0, const GradientFn& grad_log_target, double gamma,
                      std::size_t m, RngStream& rng);

}  // namespace soul
