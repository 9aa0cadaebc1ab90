#pragma once
// Seeded random streams and the small exact draws used by the samplers.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace polydisk {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) { reseed(seed, stream); }

  void reseed(std::uint64_t seed, std::uint64_t stream) {
    std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
    bits_ = 0;
    nbits_ = 0;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n) {
    if ((n & (n - 1)) == 0) return engine_() & (n - 1);
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bit() { return take_bits(1) != 0; }

  // P[k] = (3/4) (1/4)^k, as the number of leading zero pairs of bits.
  std::uint32_t geometric_quarter() {
    std::uint32_t k = 0;
    while (take_bits(2) == 0) ++k;
    return k;
  }

  double normal() { return boost::random::normal_distribution<double>()(engine_); }

  double exponential() { return -std::log(uniform_pos()); }

 private:
  std::uint64_t take_bits(int k) {
    if (nbits_ < k) {
      bits_ = engine_();
      nbits_ = 64;
    }
    std::uint64_t v = bits_ & ((std::uint64_t{1} << k) - 1);
    bits_ >>= k;
    nbits_ -= k;
    return v;
  }

  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int nbits_ = 0;
};

// Deterministic per-item seeds derived from a base seed (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace polydisk
