#pragma once

#include <cstdint>
#include <random>

#include "skewmc/vec.hpp"

namespace skewmc {

/// Deterministic random stream shared by every sampler and test in the
/// library. Draw order is part of each sampler's contract, so all
/// distributions are generated here with fixed, stateless recipes rather
/// than through std::*_distribution (whose algorithms and caching are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53 random bits; consumes one engine word.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller without pair caching; consumes exactly
  /// two engine words per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Vec normal_vec(int d) {
    Vec v(static_cast<std::size_t>(d));
    for (auto& x : v) x = normal();
    return v;
  }

  /// Uniform sign in {-1, +1}; consumes one engine word.
  int rademacher() { return uniform() < 0.5 ? -1 : +1; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; the documented rule for deriving per-chain seeds
/// from a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace skewmc
