#include "soul/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace soul {

namespace {

using Slot = std::variant<double ExperimentConfig::*, std::uint64_t ExperimentConfig::*,
                          std::string ExperimentConfig::*>;

struct Field {
  const char* key;
  Slot slot;
};

#define SOUL_FIELD(name) Field{#name, &ExperimentConfig::name}

const std::vector<Field>& run_fields() {
  static const std::vector<Field> f = {
      SOUL_FIELD(seed),       SOUL_FIELD(n_iterations), SOUL_FIELD(chain_burnin), SOUL_FIELD(theta_warmup),
      SOUL_FIELD(record_every), SOUL_FIELD(replicates), SOUL_FIELD(out_dir),      SOUL_FIELD(delta0),
      SOUL_FIELD(a),          SOUL_FIELD(gamma0),       SOUL_FIELD(b),            SOUL_FIELD(m0),
      SOUL_FIELD(c),          SOUL_FIELD(gamma_bar)};
  return f;
}

const std::vector<Field>& thme_fields() {
  static const std::vector<Field> f = {SOUL_FIELD(thme_lo),     SOUL_FIELD(thme_hi),      SOUL_FIELD(thme_points),
                                       SOUL_FIELD(thme_gamma),  SOUL_FIELD(thme_burnin),  SOUL_FIELD(thme_samples),
                                       SOUL_FIELD(thme_thin),   SOUL_FIELD(thme_fraction)};
  return f;
}

std::vector<Field> fields_for(Experiment e) {
  std::vector<Field> out = run_fields();
  auto add = [&out](std::initializer_list<Field> more) { out.insert(out.end(), more); };
  switch (e) {
    case Experiment::blr:
      add({SOUL_FIELD(theta0), SOUL_FIELD(theta_lower), SOUL_FIELD(theta_upper), SOUL_FIELD(data_in),
           SOUL_FIELD(sigma2), SOUL_FIELD(test_fraction), SOUL_FIELD(split_seed)});
      out.insert(out.end(), thme_fields().begin(), thme_fields().end());
      break;
    case Experiment::toy_gaussian:
      add({SOUL_FIELD(theta0), SOUL_FIELD(theta_lower), SOUL_FIELD(theta_upper), SOUL_FIELD(y),
           SOUL_FIELD(prior_var)});
      out.insert(out.end(), thme_fields().begin(), thme_fields().end());
      break;
    case Experiment::audio:
      add({SOUL_FIELD(theta0_factor), SOUL_FIELD(theta_lower), SOUL_FIELD(theta_upper), SOUL_FIELD(ell),
           SOUL_FIELD(n_notes), SOUL_FIELD(n_positions), SOUL_FIELD(n_measurements), SOUL_FIELD(sigma),
           SOUL_FIELD(lambda), SOUL_FIELD(sparsity), SOUL_FIELD(base_hz), SOUL_FIELD(problem_seed),
           SOUL_FIELD(grid_lo_factor), SOUL_FIELD(grid_hi_factor), SOUL_FIELD(grid_points),
           SOUL_FIELD(map_max_iter)});
      break;
    case Experiment::random_effects:
      add({SOUL_FIELD(d_y), SOUL_FIELD(n_fixed), SOUL_FIELD(dim_random), SOUL_FIELD(sigma_true),
           SOUL_FIELD(zero_frac), SOUL_FIELD(lambda), SOUL_FIELD(problem_seed), SOUL_FIELD(beta0),
           SOUL_FIELD(sigma0), SOUL_FIELD(sigma_floor), SOUL_FIELD(support_tau)});
      break;
  }
  return out;
}

#undef SOUL_FIELD

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Line {
  std::string key;
  std::string value;
  std::size_t number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "line " + std::to_string(number) + ": expected `key = value`");
    }
    out.push_back({std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), number});
  }
  return out;
}

void assign(ExperimentConfig& cfg, const Field& f, const std::string& value) {
  const std::string key = f.key;
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          cfg.*member = value;
        } else {
          T parsed{};
          const char* end = value.data() + value.size();
          const auto res = std::from_chars(value.data(), end, parsed);
          if (value.empty() || res.ec != std::errc{} || res.ptr != end) {
            throw ConfigError(key, "config key `" + key + "`: cannot parse value `" + value + "`");
          }
          cfg.*member = parsed;
        }
      },
      f.slot);
}

std::string render(const ExperimentConfig& cfg, const Field& f) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return cfg.*member;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_shortest(cfg.*member);
        } else {
          return std::to_string(cfg.*member);
        }
      },
      f.slot);
}

void check_values(const ExperimentConfig& cfg) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, std::string("config key `") + key + "` must be positive");
  };
  auto at_least_one = [](const char* key, std::uint64_t v) {
    if (v < 1) throw ConfigError(key, std::string("config key `") + key + "` must be >= 1");
  };
  at_least_one("n_iterations", cfg.n_iterations);
  at_least_one("record_every", cfg.record_every);
  at_least_one("replicates", cfg.replicates);
  at_least_one("m0", cfg.m0);
  positive("delta0", cfg.delta0);
  positive("gamma0", cfg.gamma0);
  positive("gamma_bar", cfg.gamma_bar);
  if (cfg.a < 0.0) throw ConfigError("a", "config key `a` must be >= 0");
  if (cfg.b < 0.0) throw ConfigError("b", "config key `b` must be >= 0");
  if (cfg.c < 0.0) throw ConfigError("c", "config key `c` must be >= 0");
  switch (cfg.experiment) {
    case Experiment::blr:
      positive("sigma2", cfg.sigma2);
      if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw ConfigError("test_fraction", "config key `test_fraction` must lie in (0, 1)");
      }
      [[fallthrough]];
    case Experiment::toy_gaussian:
      if (cfg.experiment == Experiment::toy_gaussian) positive("prior_var", cfg.prior_var);
      positive("thme_gamma", cfg.thme_gamma);
      at_least_one("thme_thin", cfg.thme_thin);
      if (cfg.thme_points < 5) throw ConfigError("thme_points", "config key `thme_points` must be >= 5");
      if (!(cfg.thme_hi > cfg.thme_lo)) throw ConfigError("thme_hi", "config key `thme_hi` must exceed thme_lo");
      if (!(cfg.theta_lower <= cfg.theta_upper)) {
        throw ConfigError("theta_upper", "config key `theta_upper` must be >= theta_lower");
      }
      break;
    case Experiment::audio:
      positive("sigma", cfg.sigma);
      positive("lambda", cfg.lambda);
      positive("base_hz", cfg.base_hz);
      positive("theta0_factor", cfg.theta0_factor);
      positive("theta_lower", cfg.theta_lower);
      positive("grid_lo_factor", cfg.grid_lo_factor);
      if (!(cfg.theta_lower <= cfg.theta_upper)) {
        throw ConfigError("theta_upper", "config key `theta_upper` must be >= theta_lower");
      }
      if (cfg.grid_points < 2) throw ConfigError("grid_points", "config key `grid_points` must be >= 2");
      break;
    case Experiment::random_effects:
      positive("lambda", cfg.lambda);
      positive("sigma0", cfg.sigma0);
      positive("sigma_floor", cfg.sigma_floor);
      positive("support_tau", cfg.support_tau);
      if (!(cfg.zero_frac >= 0.0 && cfg.zero_frac < 1.0)) {
        throw ConfigError("zero_frac", "config key `zero_frac` must lie in [0, 1)");
      }
      break;
  }
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::blr: return "blr";
    case Experiment::audio: return "audio";
    case Experiment::random_effects: return "random_effects";
    case Experiment::toy_gaussian: return "toy_gaussian";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::blr, Experiment::audio, Experiment::random_effects, Experiment::toy_gaussian}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("experiment", "config key `experiment`: unknown experiment `" + std::string(name) + "`");
}

std::vector<std::string> config_keys(Experiment e) {
  std::vector<std::string> keys{"experiment"};
  for (const auto& f : fields_for(e)) keys.emplace_back(f.key);
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  const auto lines = split_lines(text);
  std::map<std::string, const Line*> seen;
  for (const auto& l : lines) {
    if (!seen.emplace(l.key, &l).second) {
      throw ConfigError(l.key, "line " + std::to_string(l.number) + ": duplicate config key `" + l.key + "`");
    }
  }
  const auto exp = seen.find("experiment");
  if (exp == seen.end()) throw ConfigError("experiment", "missing config key `experiment`");

  ExperimentConfig cfg;
  cfg.experiment = parse_experiment(exp->second->value);
  const auto fields = fields_for(cfg.experiment);
  for (const auto& l : lines) {
    if (l.key == "experiment") continue;
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return l.key == f.key; });
    if (!known) {
      throw ConfigError(l.key, "line " + std::to_string(l.number) + ": unknown config key `" + l.key + "` for " +
                                   to_string(cfg.experiment));
    }
  }
  for (const auto& f : fields) {
    const auto it = seen.find(f.key);
    if (it == seen.end()) throw ConfigError(f.key, std::string("missing config key `") + f.key + "`");
    assign(cfg, f, it->second->value);
  }
  check_values(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  if (cfg.experiment == Experiment::blr) {
    // Relative data paths resolve against the working directory first, then
    // against the directory holding the config file.
    namespace fs = std::filesystem;
    fs::path data = cfg.data_in;
    if (data.is_relative() && !fs::exists(data)) {
      const fs::path beside = fs::path(path).parent_path() / data;
      if (fs::exists(beside)) data = beside;
    }
    if (!fs::exists(data)) throw ConfigError("data_in", "config key `data_in`: file not found: " + cfg.data_in);
    cfg.data_in = data.string();
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out = "experiment = " + to_string(cfg.experiment) + "\n";
  for (const auto& f : fields_for(cfg.experiment)) out += std::string(f.key) + " = " + render(cfg, f) + "\n";
  return out;
}

std::string normalize_config_text(std::string_view text) {
  std::string out;
  for (const auto& l : split_lines(text)) out += l.key + " = " + l.value + "\n";
  return out;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace soul
