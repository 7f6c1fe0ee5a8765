#include "soul/optimizer.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "soul/kernel.hpp"

namespace soul {

void SoulConfig::validate() const {
  if (n_iterations < 1) throw std::invalid_argument("SoulConfig: n_iterations must be >= 1");
  if (record_every < 1) throw std::invalid_argument("SoulConfig: record_every must be >= 1");
}

int worker_threads() {
  if (const char* env = std::getenv("SOUL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return omp_get_num_procs();
}

RunTrace soul_run(const Model& model, std::span<const double> theta0, std::span<const double> x0,
                  const ScheduleSet& schedules, const SoulConfig& config, std::uint64_t stream_id,
                  const IterationObserver& observer) {
  config.validate();
  schedules.validate();
  const ParameterDomain& domain = model.domain();
  const std::size_t dtheta = model.dim_theta();
  if (theta0.size() != dtheta) throw std::invalid_argument("soul_run: theta0 has wrong dimension");
  if (x0.size() != model.dim_x()) throw std::invalid_argument("soul_run: x0 has wrong dimension");
  if (!domain.contains(theta0)) throw std::invalid_argument("soul_run: theta0 lies outside the domain");

  const auto t_start = std::chrono::steady_clock::now();
  RngStream rng(config.seed, stream_id);
  UlaChain chain(Vector(x0.begin(), x0.end()));

  Vector theta(theta0.begin(), theta0.end());
  Vector theta_next(dtheta);
  Vector grad_est(dtheta);
  Vector grad_sample(dtheta);
  Vector grad_pen(dtheta);
  Vector chain_start(model.dim_x());

  RunTrace trace;
  trace.seed = config.seed;
  trace.stream = stream_id;

  if (config.chain_burnin > 0) {
    const auto cond = model.condition(theta);
    const GradientFn g = [&cond](std::span<const double> x, std::span<double> out) {
      cond->grad_x_log_posterior(x, out);
    };
    const double gamma = eval_gamma(1, schedules);
    for (std::size_t k = 0; k < config.chain_burnin; ++k) {
      try {
        chain.step(g, gamma, rng);
      } catch (const NonFiniteError& e) {
        throw NonFiniteError(std::string(e.what()) + " during chain burn-in step " + std::to_string(k + 1));
      }
    }
  }

  WeightedAverage average(dtheta);
  const std::size_t total = config.theta_warmup + config.n_iterations;
  for (std::size_t n = 1; n <= total; ++n) {
    const double gamma = eval_gamma(n, schedules);
    const double delta = eval_delta(n, schedules);
    const std::uint64_t m = eval_batch(n, schedules);

    const auto cond = model.condition(theta);
    const GradientFn g = [&cond](std::span<const double> x, std::span<double> out) {
      cond->grad_x_log_posterior(x, out);
    };
    if (observer) std::copy(chain.state().begin(), chain.state().end(), chain_start.begin());

    std::fill(grad_est.begin(), grad_est.end(), 0.0);
    try {
      for (std::uint64_t k = 0; k < m; ++k) {
        chain.step(g, gamma, rng);
        cond->grad_theta_log_joint(chain.state(), grad_sample);
        for (std::size_t i = 0; i < dtheta; ++i) grad_est[i] += grad_sample[i];
      }
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " at SA iteration " + std::to_string(n));
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (auto& v : grad_est) v *= inv_m;
    model.grad_penalty(theta, grad_pen);
    if (!all_finite(grad_est) || !all_finite(grad_pen)) {
      throw NonFiniteError("non-finite parameter gradient at SA iteration " + std::to_string(n));
    }

    for (std::size_t i = 0; i < dtheta; ++i) theta_next[i] = theta[i] + delta * (grad_est[i] - grad_pen[i]);
    project_inplace(theta_next, domain);
    if (!all_finite(theta_next)) {
      throw NonFiniteError("non-finite parameter iterate at SA iteration " + std::to_string(n));
    }

    const bool averaged = n > config.theta_warmup;
    if (observer) {
      observer(IterationInfo{n, averaged, delta, gamma, m, theta, theta_next, chain_start, chain.state(),
                             grad_est});
    }
    theta.swap(theta_next);

    if (averaged) {
      average.add(theta, delta);
      const std::size_t j = n - config.theta_warmup;
      const bool record = j % config.record_every == 0 || n == total;
      if (record) {
        trace.iterations.push_back(n);
        trace.deltas.push_back(delta);
        trace.thetas.push_back(theta);
        trace.averaged.push_back(average.value());
      }
      if (config.retain_latent && j % config.record_every == 0) {
        trace.retained_samples.emplace_back(chain.state().begin(), chain.state().end());
      }
    }
  }

  trace.theta_hat = average.value();
  trace.final_theta = theta;
  trace.final_latent.assign(chain.state().begin(), chain.state().end());
  trace.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

std::vector<ReplicateOutcome> replicate(const Model& model, std::span<const double> theta0,
                                        std::span<const double> x0, const ScheduleSet& schedules,
                                        const SoulConfig& config, std::size_t n_replicates) {
  if (n_replicates < 1) throw std::invalid_argument("replicate: n_replicates must be >= 1");
  std::vector<ReplicateOutcome> out(n_replicates);
  SoulConfig cfg = config;
  cfg.retain_latent = false;
  cfg.record_every = cfg.n_iterations + cfg.theta_warmup;
  const auto count = static_cast<std::ptrdiff_t>(n_replicates);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      RunTrace t = soul_run(model, theta0, x0, schedules, cfg, static_cast<std::uint64_t>(i));
      out[i].theta_hat = std::move(t.theta_hat);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace soul
