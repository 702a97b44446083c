#pragma once

// Deterministic random instances. Everything is driven by a 64-bit seed;
// suites derive one seed per case so results do not depend on how cases are
// spread over threads.

#include <cstdint>
#include <random>
#include <vector>

#include "mcomp/scalar.hpp"

namespace mcomp {

/// splitmix64 finaliser; used to derive per-case seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Default bound on random numerators and denominators.
inline constexpr long kDefaultRationalBound = 10000;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [lo, hi]. Plain modulo reduction, so the stream is identical
  /// on every standard library.
  long integer(long lo, long hi);

  std::size_t index(std::size_t count) { return static_cast<std::size_t>(integer(0, static_cast<long>(count) - 1)); }

  bool coin() { return (next() >> 63) != 0; }

  /// p/q with |p| ≤ bound and 1 ≤ q ≤ bound.
  Rational rational(long bound = kDefaultRationalBound);

  /// A rational in [0, 1] with denominator ≤ bound.
  Rational unit(long bound = kDefaultRationalBound);

  /// A rational in (0, 1) with denominator ≤ bound (bound ≥ 2).
  Rational open_unit(long bound = kDefaultRationalBound);

  /// Random weights on `count` points with variation norm exactly `norm`.
  std::vector<Rational> signed_vector_with_norm(std::size_t count, const Rational& norm, long bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mcomp
