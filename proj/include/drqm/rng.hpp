#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace drqm {

// Uniform double in [0, 1) from the generator's top 53 bits. Used instead of
// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Standard normal draw, Box-Muller on the deterministic uniforms.
inline double normal01(std::mt19937_64& g) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - uniform01(g);  // in (0, 1]
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Derives independent generators from (seed, stream id) so draws for one
// purpose never depend on how many draws another purpose consumed.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

  std::mt19937_64 stream(std::uint64_t id) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(id),
                      static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64(seq);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace drqm
