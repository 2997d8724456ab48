#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fmorrap {

// Seeded uniform source. Draws are produced from the raw 64-bit engine output
// so that a seed yields the same sequence with any standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a (seed, a, b) coordinate, e.g. one fitness
  // evaluation at (iteration, particle).
  static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer on [0, n); n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fmorrap
