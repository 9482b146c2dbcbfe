#pragma once

#include <cstdint>

namespace multigrowth {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Finalization step of splitmix64 (Vigna). Bijective on 64-bit words, so
// feeding it distinct inputs can never lose entropy.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives the seed of the random stream owned by one (replica, agent) pair.
// The derivation is pure mixing, no global state: the same master seed always
// yields the same stream for a given pair no matter how replicas are split
// across threads, and distinct pairs collide only with probability ~2^-64.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t replica_index,
                                           std::uint64_t agent_index) noexcept {
  std::uint64_t z = mix64(master_seed + kGoldenGamma);
  z = mix64(z ^ (replica_index + kGoldenGamma));
  z = mix64(z ^ (agent_index + kGoldenGamma));
  return z;
}

// splitmix64 generator. Small state, passes BigCrush, and cheap enough that
// giving every agent its own instance costs nothing. Satisfies
// UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~0ull; }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Multiply-shift map; the bias is below n/2^64,
  // far smaller than anything Monte Carlo noise could resolve here.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(operator()()) * n) >> 64);
  }

  bool bernoulli(double p) noexcept { return next_double() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace multigrowth
