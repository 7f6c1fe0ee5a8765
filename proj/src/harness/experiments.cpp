#include "soul/harness/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "soul/harness/datasets.hpp"
#include "soul/models/random_effects.hpp"
#include "soul/models/toy_gaussian.hpp"
#include "soul/rng.hpp"
#include "soul/validation/checks.hpp"

namespace soul {

ScheduleSet schedules_from(const ExperimentConfig& cfg) {
  ScheduleSet s;
  s.delta0 = cfg.delta0;
  s.a = cfg.a;
  s.gamma0 = cfg.gamma0;
  s.b = cfg.b;
  s.m0 = cfg.m0;
  s.c = cfg.c;
  s.gamma_bar = cfg.gamma_bar;
  s.validate();
  return s;
}

SoulConfig soul_config_from(const ExperimentConfig& cfg) {
  SoulConfig c;
  c.n_iterations = cfg.n_iterations;
  c.chain_burnin = cfg.chain_burnin;
  c.theta_warmup = cfg.theta_warmup;
  c.seed = cfg.seed;
  c.record_every = cfg.record_every;
  c.validate();
  return c;
}

AudioSpec audio_spec_from(const ExperimentConfig& cfg) {
  AudioSpec s;
  s.ell = cfg.ell;
  s.n_notes = cfg.n_notes;
  s.n_positions = cfg.n_positions;
  s.n_measurements = cfg.n_measurements;
  s.sigma = cfg.sigma;
  s.lambda = cfg.lambda;
  s.sparsity = cfg.sparsity;
  s.base_hz = cfg.base_hz;
  return s;
}

RandomEffectsSpec random_effects_spec_from(const ExperimentConfig& cfg) {
  RandomEffectsSpec s;
  s.d_y = cfg.d_y;
  s.n_fixed = cfg.n_fixed;
  s.dim = cfg.dim_random;
  s.sigma_true = cfg.sigma_true;
  s.zero_frac = cfg.zero_frac;
  s.lambda = cfg.lambda;
  return s;
}

ThmeChainConfig thme_chain_from(const ExperimentConfig& cfg) {
  ThmeChainConfig c;
  c.gamma = cfg.thme_gamma;
  c.burnin = cfg.thme_burnin;
  c.n_samples = cfg.thme_samples;
  c.thin = cfg.thme_thin;
  c.target_fraction = cfg.thme_fraction;
  c.seed = cfg.seed;
  return c;
}

std::vector<std::string> theory_warnings(const ScheduleSet& s, const ParameterDomain& domain) {
  std::vector<std::string> out;
  if (s.c == 0.0) {
    const FixedBatchVerdict v = check_fixed_batch(s.a, s.b);
    if (!v.valid) {
      std::string msg = "fixed batch with a=" + format_shortest(s.a) + ", b=" + format_shortest(s.b) +
                        " is outside the admissible region b in (2(1-a), a-1/2)";
      if (v.interval_empty()) msg += ", which is empty unless a > 5/6";
      out.push_back(msg + "; convergence is not covered by the theory");
    }
  } else {
    const IncreasingBatchVerdict v = check_increasing_batch(s.a, s.b, s.c);
    if (!v.valid) {
      std::string names;
      for (const auto& n : v.violated) names += (names.empty() ? "" : ", ") + n;
      out.push_back("increasing batch schedule violates " + names);
    }
  }
  if (!domain.is_compact()) out.push_back("parameter domain is not compact; the theory assumes a compact domain");
  return out;
}

PreparedRun prepare_experiment(const ExperimentConfig& cfg) {
  PreparedRun run;
  run.schedules = schedules_from(cfg);
  run.soul = soul_config_from(cfg);
  switch (cfg.experiment) {
    case Experiment::toy_gaussian: {
      auto domain = ParameterDomain::uniform(1, cfg.theta_lower, cfg.theta_upper);
      run.model = std::make_unique<ToyGaussianModel>(cfg.y, cfg.prior_var, domain);
      run.theta0 = {cfg.theta0};
      run.x0 = {cfg.y};
      break;
    }
    case Experiment::blr: {
      LoadedDataset ds = load_csv_dataset(cfg.data_in, cfg.sigma2);
      run.warnings = ds.warnings;
      auto domain = ParameterDomain::uniform(1, cfg.theta_lower, cfg.theta_upper);
      run.x0.assign(ds.data.dim(), 0.0);
      run.blr_data = ds.data;
      run.model = std::make_unique<LogisticRegressionModel>(std::move(ds.data), domain);
      run.theta0 = {cfg.theta0};
      break;
    }
    case Experiment::audio: {
      AudioProblem prob = gen_audio_problem(cfg.problem_seed, audio_spec_from(cfg));
      run.theta_cs = theta_cs(prob);
      auto domain = ParameterDomain::uniform(1, cfg.theta_lower, cfg.theta_upper);
      run.theta0 = project(Vector{cfg.theta0_factor * run.theta_cs}, domain);
      run.x0.assign(prob.dim(), 0.0);
      run.audio = prob;
      run.model = std::make_unique<AudioModel>(std::move(prob), domain);
      break;
    }
    case Experiment::random_effects: {
      RandomEffectsInstance inst = gen_random_effects_problem(cfg.problem_seed, random_effects_spec_from(cfg));
      inst.problem.sigma_floor = cfg.sigma_floor;
      run.theta0.assign(inst.problem.n_fixed() + 1, cfg.beta0);
      run.theta0.back() = cfg.sigma0;
      run.x0.assign(inst.problem.dim(), 0.0);
      run.model = std::make_unique<RandomEffectsModel>(inst.problem);
      run.random_effects = std::move(inst);
      break;
    }
  }
  for (auto& w : theory_warnings(run.schedules, run.model->domain())) run.warnings.push_back(std::move(w));
  return run;
}

Vector linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("linear_grid: need n >= 2 and hi > lo");
  Vector g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

Vector log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0)) throw std::invalid_argument("log_grid: lo must be positive");
  Vector g = linear_grid(std::log(lo), std::log(hi), n);
  for (auto& v : g) v = std::exp(v);
  g.front() = lo;
  g.back() = hi;
  return g;
}

double map_mse(const AudioProblem& prob, double theta, std::size_t max_iter) {
  if (!prob.dictionary || prob.truth.empty()) throw std::invalid_argument("map_mse: problem has no ground truth");
  MapOptions opt;
  opt.max_iter = max_iter;
  const MapResult r = map_reconstruct(prob, theta, opt);
  return mse(prob.truth, prob.dictionary->synthesize(r.x_hat));
}

Vector map_sweep(const AudioProblem& prob, std::span<const double> thetas, std::size_t max_iter) {
  Vector out(thetas.size());
  std::vector<std::string> errors(thetas.size());
  const auto count = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i] = map_mse(prob, thetas[i], max_iter);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("map_sweep: " + e);
  }
  return out;
}

double blr_prediction_error(const LogisticData& data, double theta, double test_fraction, std::uint64_t split_seed,
                            const ThmeChainConfig& chain) {
  auto [train, test] = train_test_split(data, test_fraction, split_seed);
  const GradientFn grad = [&train, theta](std::span<const double> b, std::span<double> out) {
    blr_grad_x(b, theta, train, out);
  };
  RngStream rng(chain.seed, 0);
  UlaChain ula(Vector(train.dim(), theta));
  for (std::size_t k = 0; k < chain.burnin; ++k) ula.step(grad, chain.gamma, rng);
  std::vector<Vector> samples;
  samples.reserve(chain.n_samples);
  for (std::size_t k = 0; k < chain.n_samples; ++k) {
    for (std::size_t t = 0; t < chain.thin; ++t) ula.step(grad, chain.gamma, rng);
    samples.emplace_back(ula.state().begin(), ula.state().end());
  }
  return prediction_error(test.labels, predictive_labels(samples, test.covariates));
}

}  // namespace soul
