#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soul/harness/config.hpp"
#include "soul/harness/generators.hpp"
#include "soul/models/audio.hpp"
#include "soul/models/logistic.hpp"
#include "soul/optimizer.hpp"
#include "soul/validation/thme.hpp"

namespace soul {

/// Everything soul_run needs, built from a config.
struct PreparedRun {
  std::unique_ptr<Model> model;
  Vector theta0;
  Vector x0;
  ScheduleSet schedules;
  SoulConfig soul;

  std::optional<LogisticData> blr_data;        ///< full normalized dataset
  std::optional<AudioProblem> audio;
  std::optional<RandomEffectsInstance> random_effects;
  double theta_cs = 0.0;                       ///< audio only
  std::vector<std::string> warnings;
};

ScheduleSet schedules_from(const ExperimentConfig& cfg);
SoulConfig soul_config_from(const ExperimentConfig& cfg);
AudioSpec audio_spec_from(const ExperimentConfig& cfg);
RandomEffectsSpec random_effects_spec_from(const ExperimentConfig& cfg);
ThmeChainConfig thme_chain_from(const ExperimentConfig& cfg);

PreparedRun prepare_experiment(const ExperimentConfig& cfg);

/// Non-fatal theory warnings: fixed-batch schedules outside the admissible
/// (a, b) region, increasing-batch schedules violating the rate conditions,
/// non-compact parameter domains.
std::vector<std::string> theory_warnings(const ScheduleSet& s, const ParameterDomain& domain);

/// Evenly spaced grid of n points on [lo, hi].
Vector linear_grid(double lo, double hi, std::size_t n);
/// Log-spaced grid of n points on [lo, hi], lo > 0.
Vector log_grid(double lo, double hi, std::size_t n);

/// MSE(theta) = ||z* - Psi x_MAP(theta)||^2 / ell for each grid value,
/// computed concurrently. Requires the problem's dictionary and truth.
Vector map_sweep(const AudioProblem& prob, std::span<const double> thetas, std::size_t max_iter);
double map_mse(const AudioProblem& prob, double theta, std::size_t max_iter);

/// Held-out error of the thresholded posterior predictive: splits the data,
/// runs a ULA chain on the training part at theta and classifies the test
/// part.
double blr_prediction_error(const LogisticData& data, double theta, double test_fraction, std::uint64_t split_seed,
                            const ThmeChainConfig& chain);

}  // namespace soul
