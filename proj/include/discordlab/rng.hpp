#pragma once

#include <cstdint>
#include <random>

namespace discordlab {

/// Deterministic random stream. std::mt19937_64 has a fully specified output
/// sequence; the uniform and normal conversions are done here rather than
/// through <random> distributions so results are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for work item `index` of stream `stream` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

namespace streams {
inline constexpr std::uint64_t kBaseCounts = 1;
inline constexpr std::uint64_t kResample = 2;
inline constexpr std::uint64_t kEstimator = 3;
inline constexpr std::uint64_t kOptimizer = 4;
inline constexpr std::uint64_t kReference = 5;
}  // namespace streams

}  // namespace discordlab
