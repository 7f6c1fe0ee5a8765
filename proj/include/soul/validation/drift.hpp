#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soul/core.hpp"
#include "soul/kernel.hpp"

namespace soul {

/// Tail constants of the target: <grad U(x), x> >= m1 ||x|| 1{||x|| > R1} + m2 ||grad U(x)||^2 - c,
/// with U = -log pi.
struct TailParams {
  double m1 = 1.0;
  double m2 = 0.5;
  double c = 0.0;
  double R1 = 2.0;
};

/// Constants of the exponential drift condition for ULA
///   R V_e(x) <= lambda_e^gamma V_e(x) + b_e gamma 1{||x|| < r_e},
/// V_e(x) = exp(m1_tilde sqrt(1 + ||x||^2)).
struct DriftConstants {
  double m1_tilde = 0.0;
  double lambda_e = 0.0;
  double r_e = 0.0;
  double b_e = 0.0;
};

DriftConstants drift_constants(const TailParams& tail, double gamma_bar, std::size_t dim);

double lyapunov_ve(std::span<const double> x, double m1_tilde);

struct DriftPoint {
  Vector x;
  double x_norm = 0.0;
  double lhs = 0.0;     ///< Monte-Carlo estimate of E V_e(X')
  double std_error = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct DriftReport {
  TailParams tail;
  DriftConstants constants;
  double gamma = 0.0;
  double gamma_bar = 0.0;
  std::vector<DriftPoint> points;

  bool all_pass() const;
};

/// Monte-Carlo check of the drift inequality at each test point with n_mc
/// one-step ULA draws; a point passes iff lhs <= rhs + 3 std_error. gamma_bar
/// defaults to gamma (the tightest admissible cap).
DriftReport drift_check(const GradientFn& grad_log_target, const TailParams& tail, double gamma,
                        const std::vector<Vector>& test_points, std::size_t n_mc, std::uint64_t seed = 0,
                        double gamma_bar = 0.0);

}  // namespace soul
