#pragma once

#include <cstdint>

namespace mvb {

// Splittable counter-based random stream (SplitMix64 core). Child streams are
// derived from the construction-time key only, never from consumption state,
// so a trial's stream is identical whether trials run serially or on any
// number of workers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(seed), counter_(0) {}

  // Independent child stream keyed by (this stream's key, a, b, c).
  RandomStream derive(std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) const {
    return RandomStream(derive_key(a, b, c));
  }

  std::uint64_t derive_key(std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0) const {
    std::uint64_t k = key_;
    k = mix(k + kGamma + a);
    k = mix(k ^ (b + kGamma2));
    k = mix(k ^ (c + kGamma3));
    return k;
  }

  std::uint64_t next_u64() {
    counter_ += kGamma;
    return mix(key_ ^ counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased (Lemire rejection).
  std::uint32_t next_below(std::uint32_t n) {
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - static_cast<std::uint64_t>(n)) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

  // UniformRandomBitGenerator interface, for std distributions in tests.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kGamma2 = 0xBF58476D1CE4E5B9ull;
  static constexpr std::uint64_t kGamma3 = 0x94D049BB133111EBull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace mvb
