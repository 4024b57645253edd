#pragma once

#include <cstdint>
#include <limits>

namespace rovella {

/// splitmix64; used only to expand seeds into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
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

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform01() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Independent stream for task `index` under `master`. Streams depend only on
/// (master, index), never on scheduling, so parallel runs are reproducible.
inline Xoshiro256 make_stream(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mix(master);
  const std::uint64_t a = mix.next();
  SplitMix64 mix2(a ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return Xoshiro256(mix2.next());
}

/// Seed for sub-task `index` of a run seeded with `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return make_stream(master, index)(); }

}  // namespace rovella
