#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soul {

enum class Experiment { blr, audio, random_effects, toy_gaussian };

std::string to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// Malformed, missing or unknown configuration entry. key() names it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat experiment configuration. Which keys are meaningful (and required)
/// depends on `experiment`; see config_keys().
struct ExperimentConfig {
  Experiment experiment = Experiment::toy_gaussian;

  // run
  std::uint64_t seed = 0;
  std::uint64_t n_iterations = 1000;
  std::uint64_t chain_burnin = 0;
  std::uint64_t theta_warmup = 0;
  std::uint64_t record_every = 1;
  std::uint64_t replicates = 1;
  std::string out_dir = ".";

  // schedules
  double delta0 = 1.0;
  double a = 0.8;
  double gamma0 = 0.01;
  double b = 0.0;
  std::uint64_t m0 = 1;
  double c = 0.0;
  double gamma_bar = 1.0;

  // scalar-theta models
  double theta0 = 0.0;
  double theta_lower = -100.0;
  double theta_upper = 100.0;

  // thme scan (blr, toy_gaussian)
  double thme_lo = -1.0;
  double thme_hi = 1.0;
  std::uint64_t thme_points = 11;
  double thme_gamma = 1e-3;
  std::uint64_t thme_burnin = 1000;
  std::uint64_t thme_samples = 10000;
  std::uint64_t thme_thin = 1;
  double thme_fraction = 0.4;

  // blr
  std::string data_in;
  double sigma2 = 5.0;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 0;

  // toy_gaussian
  double y = 0.0;
  double prior_var = 1.0;

  // audio
  std::uint64_t ell = 4000;
  std::uint64_t n_notes = 20;
  std::uint64_t n_positions = 10;
  std::uint64_t n_measurements = 120;
  double sigma = 0.015;
  double lambda = 4e-5;
  std::uint64_t sparsity = 8;
  double base_hz = 220.0;
  std::uint64_t problem_seed = 0;
  double theta0_factor = 1.0;  ///< theta0 = theta0_factor * theta_cs
  double grid_lo_factor = 0.1;
  double grid_hi_factor = 1e6;
  std::uint64_t grid_points = 20;
  std::uint64_t map_max_iter = 3000;

  // random_effects (also uses lambda, problem_seed)
  std::uint64_t d_y = 500;
  std::uint64_t n_fixed = 1000;
  std::uint64_t dim_random = 5;
  double sigma_true = 0.1;
  double zero_frac = 0.98;
  double beta0 = 1.0;
  double sigma0 = 1.0;
  double sigma_floor = 1e-5;
  double support_tau = 0.005;
};

/// Keys of `e` in canonical order (experiment first).
std::vector<std::string> config_keys(Experiment e);

/// Parses `key = value` lines; `#` starts a comment. Every key listed by
/// config_keys() for the chosen experiment must appear exactly once and no
/// other key may appear. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);
/// parse_config on a file, then checks that data_in exists (relative paths
/// are also tried against the config file's directory).
ExperimentConfig load_config(const std::string& path);

/// Canonical text: one `key = value` line per key in config_keys() order,
/// numbers in shortest round-trip form.
std::string serialize_config(const ExperimentConfig& cfg);

/// Drops comments and blank lines and rewrites each remaining line as
/// `key = value` with trimmed whitespace. Key order is preserved.
std::string normalize_config_text(std::string_view text);

/// Shortest decimal text that parses back to exactly v.
std::string format_shortest(double v);

}  // namespace soul
