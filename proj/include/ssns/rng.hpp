#pragma once

#include <cmath>
#include <cstdint>

#include "ssns/core.hpp"

namespace ssns {

/// SplitMix64: used both as a stream generator and to derive independent
/// sub-stream seeds (path index -> seed). Period 2^64, passes BigCrush as a
/// seeding sequence; adequate for Monte-Carlo at desk scale.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

/// Derive the seed of sub-stream `index` from a master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 s(master ^ (0xA076'1D64'78BD'642Full * (index + 1)));
  s.next();
  return s.next();
}

/// Deterministic scalar RNG: uniforms from SplitMix64, normals by Box-Muller.
/// Bit-reproducible for a fixed seed on a fixed platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_.next(); }

  /// Uniform in (0, 1]; never returns 0 so log() is safe.
  double uniform01() {
    return (static_cast<double>(gen_.next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  SplitMix64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ssns
