#pragma once

#include <cstdint>
#include <random>

namespace offsim {

/// Deterministic random source. mt19937_64 gives an identical stream on every
/// platform; the distribution methods are hand-rolled because the standard
/// distribution objects are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive per-game seeds from the master seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t round,
                                 std::uint64_t game) {
  return mix64(mix64(master ^ mix64(round + 1)) ^ mix64(game + 0x100000001ULL));
}

}  // namespace offsim
