#pragma once

#include <array>
#include <cstdint>

namespace dgl {

/// xoshiro256** seeded through splitmix64.
///
/// Every draw is defined in terms of 64-bit integer arithmetic plus IEEE-754
/// double operations, so a given (seed, stream) pair produces the same
/// sequence on any platform with the same floating-point semantics. Do not
/// swap this for std:: distributions: their output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer on [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

private:
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Stream identifiers used by the synthetic generators, so that each artifact
/// draws from an independent sequence derived from the same user seed.
namespace streams {
inline constexpr std::uint64_t kCommGraph = 0x636f6d6dULL;
inline constexpr std::uint64_t kDataGraph = 0x64617461ULL;
inline constexpr std::uint64_t kSignals = 0x7369676eULL;
} // namespace streams

} // namespace dgl
