#pragma once

#include <cstdint>
#include <span>

#include "soul/models/audio.hpp"
#include "soul/models/random_effects.hpp"

namespace soul {

struct AudioSpec {
  std::size_t ell = 4000;
  std::size_t n_notes = 20;
  std::size_t n_positions = 10;
  std::size_t n_measurements = 120;
  double sigma = 0.015;
  double lambda = 4e-5;
  std::size_t sparsity = 8;
  double base_hz = 220.0;

  /// ell = 319725, 100 notes x 29 positions, p = 456.
  static AudioSpec full_scale();
};

/// Sinusoid dictionary, p distinct uniform sample times (sorted), a
/// `sparsity`-sparse x_true with U[0.5, 1.5] amplitudes, z* = Psi x_true and
/// y = z*(times) + N(0, sigma^2).
AudioProblem gen_audio_problem(std::uint64_t seed, const AudioSpec& spec);

struct RandomEffectsSpec {
  std::size_t d_y = 500;
  std::size_t n_fixed = 1000;
  std::size_t dim = 5;
  double sigma_true = 0.1;
  double zero_frac = 0.98;
  double lambda = 30.0;
};

struct RandomEffectsInstance {
  RandomEffectsProblem problem;
  Vector beta_true;
  Vector x_true;
};

/// beta_true ~ U[1, 5] with floor(zero_frac p) entries zeroed, x_true ~ N(0, I),
/// rows v_i ~ N(0, I/p), z_i ~ N(0, I/d), y_i ~ Bernoulli(s(v_i'beta + sigma z_i'x)).
RandomEffectsInstance gen_random_effects_problem(std::uint64_t seed, const RandomEffectsSpec& spec);

/// #{i : |beta_i| > tau}
std::size_t support_count(std::span<const double> beta, double tau = 0.005);

}  // namespace soul
