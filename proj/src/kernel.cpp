#include "soul/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace soul {

void ula_update(std::span<double> x, std::span<const double> grad, double gamma,
                std::span<const double> z) {
  if (grad.size() != x.size() || z.size() != x.size()) {
    throw std::invalid_argument("ula_update: dimension mismatch");
  }
  if (gamma < 0.0) throw std::invalid_argument("ula_update: negative step");
  const double scale = std::sqrt(2.0 * gamma);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += gamma * grad[i] + scale * z[i];
}

UlaChain::UlaChain(Vector x0) : x_(std::move(x0)), grad_(x_.size()), noise_(x_.size()) {
  if (x_.empty()) throw std::invalid_argument("UlaChain: empty state");
}

void UlaChain::step(const GradientFn& grad_log_target, double gamma, RngStream& rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("ULA step size must be positive");
  grad_log_target(x_, grad_);
  if (!all_finite(grad_)) throw NonFiniteError("ULA: non-finite gradient of the log target");
  rng.fill_gaussian(noise_);
  ula_update(x_, grad_, gamma, noise_);
  if (!all_finite(x_)) throw NonFiniteError("ULA: chain state became non-finite");
}

Vector ula_step(std::span<const double> x, const GradientFn& grad_log_target, double gamma,
                RngStream& rng) {
  UlaChain chain(Vector(x.begin(), x.end()));
  chain.step(grad_log_target, gamma, rng);
  return Vector(chain.state().begin(), chain.state().end());
}

ChainResult run_chain(std::span<const double> x0, const GradientFn& grad_log_target, double gamma,
                      std::size_t m, RngStream& rng) {
  if (m == 0) throw std::invalid_argument("run_chain: m must be >= 1");
  UlaChain chain(Vector(x0.begin(), x0.end()));
  ChainResult out;
  out.samples.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    try {
      chain.step(grad_log_target, gamma, rng);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " (chain step " + std::to_string(k + 1) + ")");
    }
    out.samples.emplace_back(chain.state().begin(), chain.state().end());
  }
  out.final = out.samples.back();
  return out;
}

}  // namespace soul
