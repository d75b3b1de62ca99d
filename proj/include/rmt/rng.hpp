#pragma once

#include <cstdint>
#include <random>

namespace rmt {

/// splitmix64 step; used to whiten user seeds and derive per-member seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic seed for ensemble member `index` under base seed `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Seeded random source. Gaussian draws use the Marsaglia polar method on
/// top of mt19937_64 so the sample stream does not depend on the standard
/// library's std::normal_distribution implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal draw.
  double gaussian();

private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace rmt
