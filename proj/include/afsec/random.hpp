#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace afsec {

/// Identifier written next to every generated result so runs can be reproduced.
inline constexpr const char* kPrngName = "mt19937_64";

/// splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for (point, trial) derived from a base seed; distinct pairs give distinct
/// inputs to the bijective finalizer.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(base) ^ point) ^ (trial * 0xd1b54a32d192ed03ULL));
}

/// mt19937_64 with hand-written transforms, so draws are identical on every
/// standard library (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

  /// Rayleigh with scale s: s sqrt(-2 ln U).
  double rayleigh(double scale) { return scale * std::sqrt(-2.0 * std::log(uniform_open())); }

  /// Standard normal by Box-Muller (one draw per call).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    return r * std::cos(2.0 * M_PI * uniform_open());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace afsec
