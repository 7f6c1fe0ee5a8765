#include "soul/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soul {

namespace {

void require_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("schedule index must be >= 1");
}

// Strict inequalities are tested with a small margin, so exponents that sit on
// a boundary in exact arithmetic (5/6, or 2.1 and 3.1) are not let through
// by rounding.
constexpr double kMargin = 1e-12;

}  // namespace

void ScheduleSet::validate() const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("schedule: delta0 must be positive");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("schedule: gamma0 must be positive");
  if (!(gamma_bar > 0.0)) throw std::invalid_argument("schedule: gamma_bar must be positive");
  if (m0 < 1) throw std::invalid_argument("schedule: m0 must be >= 1");
  if (a < 0.0 || b < 0.0 || c < 0.0) throw std::invalid_argument("schedule: exponents must be >= 0");
}

double eval_delta(std::size_t n, const ScheduleSet& s) {
  require_index(n);
  return s.delta0 * std::pow(static_cast<double>(n), -s.a);
}

double eval_gamma(std::size_t n, const ScheduleSet& s) {
  require_index(n);
  return std::min(s.gamma0 * std::pow(static_cast<double>(n), -s.b), s.gamma_bar);
}

std::uint64_t eval_batch(std::size_t n, const ScheduleSet& s) {
  require_index(n);
  const double raw = static_cast<double>(s.m0) * std::pow(static_cast<double>(n), s.c);
  // pow() can land a few ulps above an exact integer (4^1.5 -> 8.000...01).
  const double nearest = std::round(raw);
  const double v = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

IncreasingBatchVerdict check_increasing_batch(double a, double b, double c) {
  IncreasingBatchVerdict v;
  if (!(1.0 - a > kMargin)) v.violated.emplace_back("a<1");
  if (!(a + b / 2.0 - 1.0 > kMargin)) v.violated.emplace_back("a+b/2>1");
  if (!(a - b + c - 1.0 > kMargin)) v.violated.emplace_back("a-b+c>1");
  v.valid = v.violated.empty();
  return v;
}

FixedBatchVerdict check_fixed_batch(double a, double b) {
  FixedBatchVerdict v;
  v.b_lo = 2.0 * (1.0 - a);
  v.b_hi = a - 0.5;
  v.valid = b - v.b_lo > kMargin && v.b_hi - b > kMargin;
  return v;
}

}  // namespace soul
