#pragma once

// Small deterministic RNG with an explicitly specified algorithm so that
// seeded runs produce identical streams on every build. <random>'s
// distributions are implementation-defined and would break byte-identical
// trace reproduction.

#include <cstdint>

namespace facopt {

// xoshiro256** stream seeded through splitmix64 state expansion.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Per-seed stream for multi-seed experiments: stream index i draws from
  // an independent generator keyed by base_seed XOR i.
  static Rng stream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(base_seed ^ index);
  }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01();

  // Uniform integer in {0, ..., n-1}, unbiased (rejection sampling).
  // Requires n >= 1.
  std::int64_t uniform_index(std::int64_t n);

  // Standard normal via the Marsaglia polar method (pairs are generated
  // together; the spare is returned by the following call).
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace facopt
