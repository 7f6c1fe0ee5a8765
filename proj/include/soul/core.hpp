#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace soul {

using Vector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when a gradient or chain state stops being finite.
class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// Axis-aligned box of admissible parameters. Bounds may be infinite, in
/// which case the domain is not compact.
class ParameterDomain {
 public:
  ParameterDomain() = default;
  ParameterDomain(Vector lower, Vector upper);

  /// Same interval [lo, hi] on every coordinate.
  static ParameterDomain uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool is_compact() const;
  bool contains(std::span<const double> theta) const;

  /// Diameter of the box; infinite when any side is unbounded.
  double diameter() const;

 private:
  Vector lower_;
  Vector upper_;
};

/// Euclidean projection onto the box (per-coordinate clamp).
Vector project(std::span<const double> theta, const ParameterDomain& domain);
void project_inplace(std::span<double> theta, const ParameterDomain& domain);

/// Running delta-weighted mean of iterates.
class WeightedAverage {
 public:
  explicit WeightedAverage(std::size_t dim = 0) : mean_(dim, 0.0) {}

  void add(std::span<const double> theta, double weight);

  const Vector& value() const { return mean_; }
  double total_weight() const { return total_; }
  std::size_t count() const { return count_; }

 private:
  Vector mean_;
  double total_ = 0.0;
  std::size_t count_ = 0;
};

/// Batch form of the averaged iterate: sum_n d_n t_n / sum_n d_n.
Vector averaged_iterate(const std::vector<Vector>& thetas, std::span<const double> deltas);

/// Per-run record of a stochastic-approximation trajectory.
struct RunTrace {
  std::vector<std::size_t> iterations;
  Vector deltas;
  std::vector<Vector> thetas;
  std::vector<Vector> averaged;

  Vector theta_hat;
  Vector final_theta;
  Vector final_latent;
  std::vector<Vector> retained_samples;

  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double wall_time = 0.0;
};

bool all_finite(std::span<const double> v);

}  // namespace soul
