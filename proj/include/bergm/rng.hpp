#pragma once

#include <cstdint>
#include <limits>

namespace bergm {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a stream index.
constexpr std::uint64_t hash_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ull) + mix64(index + 0x9e3779b97f4a7c15ull));
}

/**
 * Counter-based random stream.
 *
 * Output k of a stream with key K is mix64(K + (k + 1) * golden), so the
 * state is just (key, counter) and any draw can be reproduced from those two
 * words. split() hands out statistically independent child streams keyed by
 * an index, which lets parallel consumers (grid points, replicates) get
 * reproducible randomness regardless of scheduling.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0xd1b54a32d192ed03ull)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ull);
  }

  /// Independent child stream. Does not advance this stream.
  Rng split(std::uint64_t index) const noexcept { return Rng(hash_seed(key_, index)); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to take a log of.
  double uniform_pos() noexcept { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  /// Standard normal via Box-Muller (no cached second variate, so streams stay position-free).
  double normal() noexcept;

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bergm
