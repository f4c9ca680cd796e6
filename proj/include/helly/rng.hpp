#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "helly/linalg.hpp"

namespace helly {

// Seeded generator with platform-independent output. std::mt19937_64's raw
// sequence is fixed by the standard; the standard distributions are not, so
// the transforms below are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  // Box-Muller, one value per call
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec unit_vector(std::size_t dim) {
    Vec v(dim);
    double norm = 0.0;
    while (norm < 1e-12) {
      for (double& x : v) x = normal();
      norm = norm2(v);
    }
    for (double& x : v) x /= norm;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace helly
