#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mlccp {

// Seeded generator whose draws are identical across standard libraries.
// std::uniform_int_distribution and friends are implementation-defined, so the
// bounded draws here are built directly on the 64-bit Mersenne twister.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 bits of precision.
  double uniform01();

  // Standard normal draw (Box-Muller, no cached second value).
  double normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Identity permutation 0..n-1 shuffled with `rng`.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace mlccp
