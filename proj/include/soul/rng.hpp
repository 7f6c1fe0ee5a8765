#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace soul {

/// Gaussian source identified by (seed, stream_id). Identical identifiers give
/// bit-identical draws; distinct stream ids are seeded through std::seed_seq
/// so replicate runs get decorrelated engines.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  void fill_gaussian(std::span<double> out);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace soul
