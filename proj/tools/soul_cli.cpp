// Command-line front end: run, replicate, thme-scan, gradcheck,
// check-schedule, drift-check, gen-data, map-sweep.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soul/harness/config.hpp"
#include "soul/harness/csv.hpp"
#include "soul/harness/experiments.hpp"
#include "soul/harness/generators.hpp"
#include "soul/schedules.hpp"
#include "soul/validation/checks.hpp"
#include "soul/validation/drift.hpp"
#include "soul/validation/gradient_suite.hpp"
#include "soul/validation/thme.hpp"

namespace fs = std::filesystem;
using namespace soul;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

// Bounds such as 2(1 - 0.9) carry rounding noise; six digits is plenty for a verdict.
std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string out_dir_for(const ExperimentConfig& cfg, const std::string& override_dir) {
  const std::string dir = override_dir.empty() ? cfg.out_dir : override_dir;
  fs::create_directories(dir);
  return dir;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  const ExperimentConfig cfg = load_config(config_path);
  PreparedRun run = prepare_experiment(cfg);
  print_warnings(run.warnings);
  const std::string dir = out_dir_for(cfg, out_override);
  const RunTrace trace = soul_run(*run.model, run.theta0, run.x0, run.schedules, run.soul);
  trace_csv(trace).write((fs::path(dir) / "trace.csv").string());

  std::ostringstream extra;
  if (run.audio) {
    extra << " theta_cs=" << format_double(run.theta_cs)
          << " mse_theta_hat=" << format_double(map_mse(*run.audio, trace.theta_hat[0], cfg.map_max_iter))
          << " mse_theta_cs=" << format_double(map_mse(*run.audio, run.theta_cs, cfg.map_max_iter));
  }
  if (run.random_effects) {
    const Vector beta(trace.theta_hat.begin(), trace.theta_hat.end() - 1);
    extra << " sigma_hat=" << format_double(trace.theta_hat.back())
          << " support=" << support_count(beta, cfg.support_tau)
          << " true_support=" << support_count(run.random_effects->beta_true, cfg.support_tau);
    // The full (p+1)-vector is in trace.csv; keep the summary line short.
    std::cout << "theta_hat=<" << trace.theta_hat.size() << " values in trace.csv>";
  } else {
    std::cout << "theta_hat=" << join(trace.theta_hat);
  }
  std::cout << " wall_time_s=" << format_double(trace.wall_time) << extra.str() << "\n";
  return kOk;
}

int cmd_replicate(const std::string& config_path, const std::string& out_override, std::size_t n_override,
                  std::size_t bins) {
  const ExperimentConfig cfg = load_config(config_path);
  PreparedRun run = prepare_experiment(cfg);
  print_warnings(run.warnings);
  const std::string dir = out_dir_for(cfg, out_override);
  const std::size_t n = n_override ? n_override : cfg.replicates;
  const auto outcomes = replicate(*run.model, run.theta0, run.x0, run.schedules, run.soul, n);

  const std::size_t k = run.model->dim_theta();
  std::vector<std::string> header{"replicate"};
  for (std::size_t i = 0; i < k; ++i) header.push_back("theta_hat_" + std::to_string(i));
  header.push_back("error");
  CsvWriter csv(header);
  Vector first;
  std::size_t failures = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    std::vector<std::string> row{std::to_string(r)};
    if (outcomes[r].ok()) {
      for (double v : *outcomes[r].theta_hat) row.push_back(format_double(v));
      row.emplace_back();
      first.push_back(outcomes[r].theta_hat->front());
    } else {
      ++failures;
      for (std::size_t i = 0; i < k; ++i) row.emplace_back("nan");
      std::string msg = outcomes[r].error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      row.push_back(msg);
    }
    csv.add_row(row);
  }
  csv.write((fs::path(dir) / "replicates.csv").string());

  if (!first.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(first.begin(), first.end());
    const double lo = *lo_it;
    const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : first) {
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      counts[std::min(b, bins - 1)]++;
    }
    CsvWriter hist({"bin_lo", "bin_hi", "count"});
    for (std::size_t b = 0; b < bins; ++b) {
      const double a = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
      const double z = lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins);
      hist.add_row({format_double(a), format_double(z), std::to_string(counts[b])});
    }
    hist.write((fs::path(dir) / "histogram.csv").string());
    double mean = 0.0;
    for (double v : first) mean += v;
    mean /= static_cast<double>(first.size());
    std::cout << "replicates=" << n << " failures=" << failures << " mean_theta_hat_0=" << format_double(mean)
              << "\n";
  }
  return failures == 0 ? kOk : kFailed;
}

int cmd_thme_scan(const std::string& config_path, const std::string& out_override) {
  const ExperimentConfig cfg = load_config(config_path);
  if (cfg.experiment != Experiment::blr && cfg.experiment != Experiment::toy_gaussian) {
    throw UsageError("thme-scan needs a blr or toy_gaussian config");
  }
  PreparedRun run = prepare_experiment(cfg);
  const std::string dir = out_dir_for(cfg, out_override);
  const Vector grid = linear_grid(cfg.thme_lo, cfg.thme_hi, cfg.thme_points);
  const ThmeScan scan = thme_scan(*run.model, grid, run.x0, thme_chain_from(cfg));

  CsvWriter csv({"theta", "log_phat", "n_inside", "radius"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.add_row({format_double(grid[i]), format_double(scan.log_marginal[i]), std::to_string(scan.n_inside[i]),
                 format_double(scan.radius[i])});
  }
  csv.write((fs::path(dir) / "thme_scan.csv").string());
  const bool concave = concavity_check(scan.theta_grid, scan.log_marginal, 3.0 * scan.pooled_stderr());
  std::cout << "quad=" << format_double(scan.quad.a2) << "," << format_double(scan.quad.a1) << ","
            << format_double(scan.quad.a0) << " theta_star="
            << (scan.theta_star ? format_double(*scan.theta_star) : std::string("none"))
            << " concave=" << (concave ? "yes" : "no") << "\n";
  return scan.theta_star && concave ? kOk : kFailed;
}

int cmd_gradcheck(std::uint64_t seed, std::size_t points) {
  bool ok = true;
  for (const auto& r : gradient_suite(seed, points)) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " points=" << r.points
              << " max_rel_err=" << format_double(r.max_error) << "\n";
    ok = ok && r.pass;
  }
  return ok ? kOk : kFailed;
}

int cmd_check_schedule(double a, double b, double c, bool fixed) {
  if (a < 0.0 || b < 0.0 || c < 0.0) throw UsageError("exponents must be >= 0");
  if (fixed) {
    const FixedBatchVerdict v = check_fixed_batch(a, b);
    std::cout << (v.valid ? "valid" : "invalid") << ", b∈(" << brief(v.b_lo) << "," << brief(v.b_hi) << ")";
    if (v.interval_empty()) std::cout << " (empty: needs a > 5/6)";
    std::cout << "\n";
    return v.valid ? kOk : kFailed;
  }
  const IncreasingBatchVerdict v = check_increasing_batch(a, b, c);
  std::cout << (v.valid ? "valid" : "invalid");
  for (std::size_t i = 0; i < v.violated.size(); ++i) std::cout << (i ? ", " : ", violated: ") << v.violated[i];
  std::cout << "\n";
  return v.valid ? kOk : kFailed;
}

int cmd_drift_check(double gamma, const std::vector<double>& norms, std::size_t dim, std::size_t n_mc,
                    const TailParams& tail, std::uint64_t seed, const std::string& out) {
  if (dim == 0) throw UsageError("--dim must be >= 1");
  std::vector<Vector> points;
  for (double r : norms) {
    Vector x(dim, 0.0);
    x[0] = r;
    points.push_back(std::move(x));
  }
  const GradientFn gaussian = [](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -x[i];
  };
  const DriftReport rep = drift_check(gaussian, tail, gamma, points, n_mc, seed);
  CsvWriter csv({"x_norm", "lhs", "stderr", "rhs", "pass"});
  for (const auto& p : rep.points) {
    csv.add_row({format_double(p.x_norm), format_double(p.lhs), format_double(p.std_error), format_double(p.rhs),
                 p.pass ? "1" : "0"});
  }
  if (!out.empty()) {
    csv.write(out);
  } else {
    std::cout << csv.str();
  }
  std::cout << "lambda_e=" << format_double(rep.constants.lambda_e) << " b_e=" << format_double(rep.constants.b_e)
            << " r_e=" << format_double(rep.constants.r_e) << " pass=" << (rep.all_pass() ? "yes" : "no") << "\n";
  return rep.all_pass() ? kOk : kFailed;
}

int cmd_gen_data(const std::string& config_path, const std::string& out_override) {
  const ExperimentConfig cfg = load_config(config_path);
  const fs::path dir = out_dir_for(cfg, out_override);
  if (cfg.experiment == Experiment::audio) {
    const AudioProblem prob = gen_audio_problem(cfg.problem_seed, audio_spec_from(cfg));
    matrix_csv(prob.sensing, "a_").write((dir / "sensing.csv").string());
    vector_csv(prob.observation, "y").write((dir / "observation.csv").string());
    Vector times(prob.sample_times.begin(), prob.sample_times.end());
    vector_csv(times, "t").write((dir / "sample_times.csv").string());
    vector_csv(prob.truth, "z").write((dir / "truth.csv").string());
    vector_csv(prob.x_true, "x").write((dir / "x_true.csv").string());
  } else if (cfg.experiment == Experiment::random_effects) {
    const RandomEffectsInstance inst = gen_random_effects_problem(cfg.problem_seed, random_effects_spec_from(cfg));
    matrix_csv(inst.problem.covariates, "v_").write((dir / "covariates.csv").string());
    matrix_csv(inst.problem.loadings, "z_").write((dir / "loadings.csv").string());
    vector_csv(inst.problem.labels, "y").write((dir / "labels.csv").string());
    vector_csv(inst.beta_true, "beta").write((dir / "beta_true.csv").string());
    vector_csv(inst.x_true, "x").write((dir / "x_true.csv").string());
  } else {
    throw UsageError("gen-data needs an audio or random_effects config");
  }
  std::cout << "wrote " << dir.string() << "\n";
  return kOk;
}

int cmd_map_sweep(const std::string& config_path, const std::string& out_override) {
  const ExperimentConfig cfg = load_config(config_path);
  if (cfg.experiment != Experiment::audio) throw UsageError("map-sweep needs an audio config");
  const AudioProblem prob = gen_audio_problem(cfg.problem_seed, audio_spec_from(cfg));
  const double cs = theta_cs(prob);
  const Vector grid = log_grid(cfg.grid_lo_factor * cs, cfg.grid_hi_factor * cs, cfg.grid_points);
  const Vector mses = map_sweep(prob, grid, cfg.map_max_iter);
  CsvWriter csv({"theta", "mse"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.add_row(Vector{grid[i], mses[i]});
  csv.write((fs::path(out_dir_for(cfg, out_override)) / "map_sweep.csv").string());
  const auto best = std::min_element(mses.begin(), mses.end()) - mses.begin();
  std::cout << "theta_cs=" << format_double(cs) << " best_theta=" << format_double(grid[best])
            << " best_mse=" << format_double(mses[best]) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical Bayes estimation by stochastic approximation with unadjusted Langevin chains"};
  app.require_subcommand(1);

  std::string config, out;
  std::size_t n_rep = 0, bins = 30, points = 100, dim = 2, n_mc = 100000;
  std::uint64_t seed = 0;
  double a = 0.8, b = 0.0, c = 0.0, gamma = 0.1;
  bool fixed = false;
  std::vector<double> norms{0, 1, 2, 5, 10};
  TailParams tail;

  auto* run = app.add_subcommand("run", "run SOUL once and write trace.csv");
  run->add_option("-c,--config", config, "experiment config")->required();
  run->add_option("-o,--out", out, "output directory (overrides out_dir)");

  auto* rep = app.add_subcommand("replicate", "independent runs on streams 0..n-1");
  rep->add_option("-c,--config", config, "experiment config")->required();
  rep->add_option("-o,--out", out, "output directory");
  rep->add_option("-n,--replicates", n_rep, "number of runs (default: config value)");
  rep->add_option("--bins", bins, "histogram bins")->check(CLI::PositiveNumber);

  auto* scan = app.add_subcommand("thme-scan", "log-marginal grid by truncated harmonic mean");
  scan->add_option("-c,--config", config, "experiment config")->required();
  scan->add_option("-o,--out", out, "output directory");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference checks of all model gradients");
  grad->add_option("--seed", seed, "seed");
  grad->add_option("--points", points, "random points per gradient")->check(CLI::PositiveNumber);

  auto* sched = app.add_subcommand("check-schedule", "admissibility of step-size and batch exponents");
  sched->add_option("--a", a, "delta exponent")->required();
  sched->add_option("--b", b, "gamma exponent");
  sched->add_option("--c", c, "batch exponent");
  sched->add_flag("--fixed-batch", fixed, "constant chain length");

  auto* drift = app.add_subcommand("drift-check", "Monte-Carlo drift check for a standard Gaussian target");
  drift->add_option("--gamma", gamma, "ULA step")->required();
  drift->add_option("--norms", norms, "test point norms")->delimiter(',');
  drift->add_option("--dim", dim, "dimension");
  drift->add_option("--n-mc", n_mc, "draws per point")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  drift->add_option("--m1", tail.m1, "tail constant m1");
  drift->add_option("--m2", tail.m2, "tail constant m2");
  drift->add_option("--tail-c", tail.c, "tail constant c");
  drift->add_option("--R1", tail.R1, "tail radius R1");
  drift->add_option("--seed", seed, "seed");
  drift->add_option("-o,--out", out, "CSV path (default: stdout)");

  auto* gen = app.add_subcommand("gen-data", "write a synthetic problem as CSV files");
  gen->add_option("-c,--config", config, "audio or random_effects config")->required();
  gen->add_option("-o,--out", out, "output directory");

  auto* sweep = app.add_subcommand("map-sweep", "MSE of the MAP reconstruction over a log grid of theta");
  sweep->add_option("-c,--config", config, "audio config")->required();
  sweep->add_option("-o,--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*rep) return cmd_replicate(config, out, n_rep, bins);
    if (*scan) return cmd_thme_scan(config, out);
    if (*grad) return cmd_gradcheck(seed, points);
    if (*sched) return cmd_check_schedule(a, b, c, fixed);
    if (*drift) return cmd_drift_check(gamma, norms, dim, n_mc, tail, seed, out);
    if (*gen) return cmd_gen_data(config, out);
    if (*sweep) return cmd_map_sweep(config, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
