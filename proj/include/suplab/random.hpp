#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace suplab {

// Seeded stream of draws. The engine is std::mt19937_64 (its output sequence
// is fixed by the standard); the real-valued transforms are implemented here
// rather than through <random> distributions, whose algorithms vary between
// standard libraries. Same seed, same draws, on any platform.
//
// Single owner: never share one instance between concurrent tasks; derive a
// child stream per task instead.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  // Independent stream keyed by (seed, a, b), e.g. (seed, appliance, day).
  static RandomSource derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform on [lo, hi); returns lo when hi == lo.
  double uniform(double lo, double hi);
  // Uniform integer on the closed range [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal (Marsaglia polar method).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace suplab
