#pragma once

#include <cstdint>
#include <random>

namespace concordia {

/// SplitMix64 finalizer. Used to derive independent substream seeds from a
/// (seed, counter) pair.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of substream `stream` under master seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Deterministic generator whose output depends only on (seed, stream).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded integers and uniform doubles are derived here rather than
/// through <random> distributions, whose algorithms vary between standard
/// libraries. Results are therefore identical across platforms, and replicate
/// i of any resampling procedure uses stream i, so serial and parallel
/// execution agree.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace concordia
