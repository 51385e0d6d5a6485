#pragma once

#include <cmath>
#include <cstdint>

namespace robsvm {

// Deterministic 64-bit generator (splitmix64).  Every stochastic operation
// in this library draws from it, so outputs are reproducible across runs,
// platforms and builds.  The draw protocol per operation is documented in
// docs/formats.md; changing it is a format break.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform on [0,1), 53 bits
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform on {0,...,n-1} by modulo reduction; n is tiny relative to 2^64
  // in all uses, so the reduction bias is far below sampling error
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  bool next_bit() { return (next_u64() & 1ULL) != 0; }

  // standard normal via Box-Muller; consumes exactly two uniforms per draw
  double next_normal() {
    constexpr double two_pi = 6.283185307179586476925287;
    double u1 = 1.0 - next_double();  // (0,1], keeps log() finite
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace robsvm
