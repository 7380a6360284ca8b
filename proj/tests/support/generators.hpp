#pragma once

// Seeded random instances for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "glueprint/exact_lattice.hpp"
#include "glueprint/torus_mapping_class.hpp"

namespace glueprint::props {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return uniform(0, 1) == 1; }

  // Random element of SL(2,Z) as a word in the standard generators.
  torus::TorusAuto sl2(int length) {
    const auto s = torus::TorusAuto::from_entries(0, -1, 1, 0);
    auto m = torus::TorusAuto::identity();
    for (int i = 0; i < length; ++i) m = m * (coin() ? s : torus::fiber_twist(uniform(-2, 2)));
    return m;
  }

  // Orientation-reversing automorphism with small entries.
  torus::TorusAuto reversing(int length) { return torus::TorusAuto::from_entries(1, 0, 0, -1) * sl2(length); }

  // Positive-definite integer Gram matrix with entries in a small box.
  RatMatrix definite_gram(std::size_t n, std::int64_t spread) {
    while (true) {
      RatMatrix b(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = Rational(uniform(-spread, spread));
      RatMatrix g = multiply(b.transpose(), b);
      for (std::size_t i = 0; i < n; ++i) g(i, i) += 1;
      return g;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace glueprint::props
