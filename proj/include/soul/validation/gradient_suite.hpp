#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace soul {

struct GradientCheckResult {
  std::string name;
  std::size_t points = 0;
  double max_error = 0.0;
  bool pass = false;
};

/// Finite-difference checks of every model gradient against its log joint
/// on small random instances, n_points random points each. Huber-based
/// gradients skip points within max(1e-4 lambda, h) of the knee.
std::vector<GradientCheckResult> gradient_suite(std::uint64_t seed, std::size_t n_points = 100,
                                                double tolerance = 1e-5, double h = 1e-5);

}  // namespace soul
