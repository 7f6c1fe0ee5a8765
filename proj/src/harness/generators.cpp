#include "soul/harness/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "soul/models/logistic.hpp"
#include "soul/rng.hpp"

namespace soul {

namespace {

// First k entries of a uniformly shuffled 0..n-1.
std::vector<std::size_t> choose_distinct(std::size_t n, std::size_t k, RngStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  return idx;
}

}  // namespace

AudioSpec AudioSpec::full_scale() {
  AudioSpec s;
  s.ell = 319725;
  s.n_notes = 100;
  s.n_positions = 29;
  s.n_measurements = 456;
  s.base_hz = 27.5;
  s.sparsity = 40;
  return s;
}

AudioProblem gen_audio_problem(std::uint64_t seed, const AudioSpec& spec) {
  const std::size_t d = spec.n_notes * spec.n_positions;
  if (d == 0 || d > spec.ell) throw std::invalid_argument("gen_audio_problem: need 0 < n_notes * n_positions <= ell");
  if (spec.n_measurements == 0 || spec.n_measurements >= spec.ell) {
    throw std::invalid_argument("gen_audio_problem: need 0 < n_measurements < ell");
  }
  if (spec.sparsity > d) throw std::invalid_argument("gen_audio_problem: sparsity exceeds dictionary size");

  RngStream rng(seed, 0);
  AudioProblem prob;
  prob.sigma = spec.sigma;
  prob.lambda = spec.lambda;
  prob.dictionary.emplace(spec.ell, spec.n_notes, spec.n_positions, spec.base_hz);

  prob.x_true.assign(d, 0.0);
  for (std::size_t j : choose_distinct(d, spec.sparsity, rng)) prob.x_true[j] = 0.5 + rng.uniform();
  prob.truth = prob.dictionary->synthesize(prob.x_true);

  prob.sample_times = choose_distinct(spec.ell, spec.n_measurements, rng);
  std::sort(prob.sample_times.begin(), prob.sample_times.end());
  prob.sensing = prob.dictionary->rows(prob.sample_times);
  prob.observation.resize(spec.n_measurements);
  for (std::size_t i = 0; i < spec.n_measurements; ++i) {
    prob.observation[i] = prob.truth[prob.sample_times[i]] + spec.sigma * rng.gaussian();
  }
  prob.validate();
  return prob;
}

RandomEffectsInstance gen_random_effects_problem(std::uint64_t seed, const RandomEffectsSpec& spec) {
  if (spec.d_y == 0 || spec.n_fixed == 0 || spec.dim == 0) {
    throw std::invalid_argument("gen_random_effects_problem: dimensions must be positive");
  }
  if (!(spec.zero_frac >= 0.0 && spec.zero_frac < 1.0)) {
    throw std::invalid_argument("gen_random_effects_problem: zero_frac must lie in [0, 1)");
  }
  if (spec.sigma_true < 0.0) throw std::invalid_argument("gen_random_effects_problem: sigma_true must be >= 0");

  RngStream rng(seed, 0);
  RandomEffectsInstance inst;
  const std::size_t p = spec.n_fixed;
  const std::size_t d = spec.dim;

  inst.beta_true.resize(p);
  for (auto& b : inst.beta_true) b = 1.0 + 4.0 * rng.uniform();
  const auto n_zero = static_cast<std::size_t>(std::floor(spec.zero_frac * static_cast<double>(p)));
  for (std::size_t j : choose_distinct(p, n_zero, rng)) inst.beta_true[j] = 0.0;

  inst.x_true.resize(d);
  rng.fill_gaussian(inst.x_true);

  RandomEffectsProblem& prob = inst.problem;
  prob.lambda = spec.lambda;
  prob.covariates = Matrix(spec.d_y, p);
  prob.loadings = Matrix(spec.d_y, d);
  const double sv = 1.0 / std::sqrt(static_cast<double>(p));
  const double sz = 1.0 / std::sqrt(static_cast<double>(d));
  for (auto& v : prob.covariates.data()) v = sv * rng.gaussian();
  for (auto& z : prob.loadings.data()) z = sz * rng.gaussian();

  Vector fixed(spec.d_y), random(spec.d_y);
  linalg::gemv(prob.covariates, inst.beta_true, fixed);
  linalg::gemv(prob.loadings, inst.x_true, random);
  prob.labels.resize(spec.d_y);
  for (std::size_t i = 0; i < spec.d_y; ++i) {
    prob.labels[i] = rng.uniform() < sigmoid(fixed[i] + spec.sigma_true * random[i]) ? 1.0 : 0.0;
  }
  prob.validate();
  return inst;
}

std::size_t support_count(std::span<const double> beta, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("support_count: tau must be positive");
  return static_cast<std::size_t>(std::count_if(beta.begin(), beta.end(), [tau](double b) { return std::abs(b) > tau; }));
}

}  // namespace soul
