#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace botdetect {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective 64-bit mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream purposes mixed into derived seeds so that, e.g., the calibration
/// nulls and the audit nulls of one grid point never share a stream.
enum class StreamPurpose : std::uint64_t {
  kNullSample = 1,
  kAlternativeSample = 2,
  kCalibration = 3,
  kAudit = 4,
  kHistogramNull = 5,
  kHistogramAlternative = 6,
  kRiskSample = 7,
  kIsolationProbe = 8,
  kPairSampling = 9,
};

/// seed XOR hash(components...), hashing each component through SplitMix64
/// in sequence. Deterministic and independent of thread scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> components) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t c : components) h = splitmix64_mix(h ^ c);
  return master ^ h;
}

/// xoshiro256** 1.0 (Blackman, Vigna), state seeded by four SplitMix64 draws.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      word = splitmix64_mix(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

}  // namespace botdetect
