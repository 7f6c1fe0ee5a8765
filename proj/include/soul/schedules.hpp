#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace soul {

/// Polynomial-decay laws for the SA step delta_n, the Langevin step gamma_n
/// and the chain length m_n:
///   delta_n = delta0 n^-a,  gamma_n = min(gamma0 n^-b, gamma_bar),  m_n = ceil(m0 n^c).
struct ScheduleSet {
  double delta0 = 1.0;
  double a = 0.8;
  double gamma0 = 0.01;
  double b = 0.0;
  std::uint64_t m0 = 1;
  double c = 0.0;
  double gamma_bar = 1.0;

  void validate() const;
};

double eval_delta(std::size_t n, const ScheduleSet& s);
double eval_gamma(std::size_t n, const ScheduleSet& s);
std::uint64_t eval_batch(std::size_t n, const ScheduleSet& s);

struct IncreasingBatchVerdict {
  bool valid = false;
  std::vector<std::string> violated;
};

/// Admissibility of (a, b, c) for growing chain lengths when the kernel bias
/// scales like sqrt(gamma): a < 1, a + b/2 > 1, a - b + c > 1.
IncreasingBatchVerdict check_increasing_batch(double a, double b, double c);

struct FixedBatchVerdict {
  bool valid = false;
  double b_lo = 0.0;
  double b_hi = 0.0;

  bool interval_empty() const { return !(b_hi - b_lo > 1e-12); }
};

/// Admissibility of (a, b) with a fixed chain length: b must lie in the open
/// interval (2(1 - a), a - 1/2), non-empty only for a > 5/6.
FixedBatchVerdict check_fixed_batch(double a, double b);

}  // namespace soul
