#include "mcomp/random.hpp"

#include "mcomp/errors.hpp"

namespace mcomp {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long Rng::integer(long lo, long hi) {
  require(lo <= hi, "Rng::integer: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(next() % span);
}

Rational Rng::rational(long bound) {
  Rational r(integer(-bound, bound), integer(1, bound));
  r.canonicalize();
  return r;
}

Rational Rng::unit(long bound) {
  const long den = integer(1, bound);
  Rational r(integer(0, den), den);
  r.canonicalize();
  return r;
}

Rational Rng::open_unit(long bound) {
  const long den = integer(2, bound < 2 ? 2 : bound);
  Rational r(integer(1, den - 1), den);
  r.canonicalize();
  return r;
}

std::vector<Rational> Rng::signed_vector_with_norm(std::size_t count, const Rational& norm, long bound) {
  std::vector<Rational> v(count);
  Rational total = 0;
  for (auto& x : v) {
    x = rational(bound);
    total += abs(x);
  }
  if (total == 0) {
    if (count == 0) return v;
    v[index(count)] = coin() ? Rational(1) : Rational(-1);
    total = 1;
  }
  for (auto& x : v) x = x * norm / total;
  return v;
}

}  // namespace mcomp
