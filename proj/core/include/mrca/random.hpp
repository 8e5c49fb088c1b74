#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mrca {

/// SplitMix64 finalizer. Used only to derive independent seeds from a base
/// seed and a tuple of keys (replicate index, band, time slice, ...).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> keys) noexcept;

/// SplitMix64 as a sequential engine (UniformRandomBitGenerator). Seeding is
/// a single word, which matters when one engine is built per event cell.
class SplitMix64Engine {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64Engine(std::uint64_t seed) noexcept : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seeded random source. Distributions are written out here instead of using
/// the <random> distribution objects so that a seed reproduces the same
/// stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  /// Uniform on (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }

  double exponential(double rate) noexcept;
  std::uint64_t poisson(double mean);
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;
  double gamma(double shape, double scale);
  double normal() noexcept;

  SplitMix64Engine& engine() noexcept { return engine_; }

 private:
  SplitMix64Engine engine_;
};

}  // namespace mrca
