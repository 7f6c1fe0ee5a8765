#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soul/core.hpp"
#include "soul/model.hpp"
#include "soul/schedules.hpp"

namespace soul {

struct SoulConfig {
  std::size_t n_iterations = 1000;  ///< N iterations that enter the average
  std::size_t chain_burnin = 0;     ///< ULA steps at fixed theta0 before any update
  std::size_t theta_warmup = 0;     ///< SA iterations run but excluded from the average
  std::uint64_t seed = 0;
  std::size_t record_every = 1;
  bool retain_latent = false;

  void validate() const;
};

/// Snapshot handed to an optional per-iteration observer.
struct IterationInfo {
  std::size_t iteration = 0;  ///< global SA index n (warm-up included)
  bool averaged = false;      ///< true once past the warm-up phase
  double delta = 0.0;
  double gamma = 0.0;
  std::uint64_t batch = 0;
  std::span<const double> theta_before;
  std::span<const double> theta_after;
  std::span<const double> chain_start;
  std::span<const double> chain_final;
  std::span<const double> gradient_estimate;
};

using IterationObserver = std::function<void(const IterationInfo&)>;

/// Stochastic Optimization via Unadjusted Langevin. Each iteration runs m_n
/// warm-started ULA steps at (gamma_n, theta_n), averages grad_theta log p over
/// the m_n new states, and takes a projected ascent step with delta_{n+1}.
/// Warm-up iterations advance the schedule index but are excluded from the
/// delta-weighted average theta_hat.
RunTrace soul_run(const Model& model, std::span<const double> theta0, std::span<const double> x0,
                  const ScheduleSet& schedules, const SoulConfig& config, std::uint64_t stream_id = 0,
                  const IterationObserver& observer = {});

struct ReplicateOutcome {
  std::optional<Vector> theta_hat;
  std::string error;

  bool ok() const { return theta_hat.has_value(); }
};

/// Independent SOUL runs on streams (config.seed, i), i = 0..n-1. Failures are
/// collected per replicate. Runs execute concurrently, capped by
/// worker_threads(); result order always follows the stream index.
std::vector<ReplicateOutcome> replicate(const Model& model, std::span<const double> theta0,
                                        std::span<const double> x0, const ScheduleSet& schedules,
                                        const SoulConfig& config, std::size_t n_replicates);

/// Thread cap: SOUL_THREADS if set and positive, else hardware parallelism.
int worker_threads();

}  // namespace soul
