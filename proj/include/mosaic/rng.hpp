#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace mosaic {

// Portable seeded generator: the standard fixes mt19937_64's output sequence,
// and every distribution below is implemented here rather than taken from
// <random>, whose distributions differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], rejection-sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Box-Muller.
  double normal(double mean, double sd);
  bool bernoulli(double p);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace mosaic
