#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "otmatch/permutation.hpp"

namespace otmatch {

// Seedable generator with platform-independent output: the engine is
// mt19937_64 (sequence fixed by the standard) and every distribution below
// is implemented here rather than through <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on [0, bound), bound > 0, without modulo bias.
  std::size_t below(std::size_t bound);

  // Uniformly random permutation (Fisher-Yates).
  Permutation permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for an independent stream keyed by (master seed, index).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

}  // namespace otmatch
