#pragma once

#include <cstdint>
#include <random>

namespace lghmc {

// Seedable generator with deterministic output. std::mt19937_64 produces a
// fixed bit stream everywhere; the uniform and normal mappings are done by
// hand because the standard distribution objects differ between standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia's polar method.
  double normal();

  // Uniform integer in [lo, hi], both inclusive.
  long uniform_int(long lo, long hi);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lghmc
