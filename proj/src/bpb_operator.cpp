#include "mcomp/bpb_operator.hpp"

#include <string>

#include "mcomp/random.hpp"

namespace mcomp {

template <class S>
OperatorTable<S>::OperatorTable(PointSet points) : points_(std::move(points)) {
  rows_.assign(points_.size(), AtomicMeasure<S>(points_));
}

template <class S>
OperatorTable<S>::OperatorTable(PointSet points, std::vector<AtomicMeasure<S>> rows)
    : points_(std::move(points)), rows_(std::move(rows)) {
  require(rows_.size() == points_.size(), "operator: need one row per point");
  for (const auto& r : rows_) require(r.points() == points_, "operator: row lives on a different point set");
}

template <class S>
OperatorTable<S> OperatorTable<S>::identity(PointSet points) {
  OperatorTable T(std::move(points));
  for (std::size_t t = 0; t < T.size(); ++t) T.rows_[t][t] = S(1);
  return T;
}

template <class S>
OperatorTable<S> OperatorTable<S>::operator-(const OperatorTable& rhs) const {
  require(points_ == rhs.points_, "operator difference: point set mismatch");
  OperatorTable out(points_);
  for (std::size_t t = 0; t < size(); ++t) out.rows_[t] = rows_[t] - rhs.rows_[t];
  return out;
}

template <class S>
GridFunction<S> apply(const OperatorTable<S>& T, const GridFunction<S>& h) {
  require(T.points() == h.points(), "apply: point set mismatch");
  GridFunction<S> out(T.points());
  for (std::size_t t = 0; t < T.size(); ++t) out[t] = pairing(T.row(t), h);
  return out;
}

template <class S>
S operator_norm(const OperatorTable<S>& T) {
  S best(0);
  for (const auto& r : T.rows()) best = max_of(best, variation_norm(r));
  return best;
}

namespace {

// Value of the best admissible pair for the sign pattern `mask`
// (bit s set ⇔ x(s) = +1). For x* = ±δ_t with x*(x) = 1 the sign is forced to
// x(t), so |x*(T x)| = |(T x)(t)|.
template <class S>
S best_for_pattern(const OperatorTable<S>& T, std::uint64_t mask) {
  const std::size_t n = T.size();
  S best(0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& row = T.row(t);
    S value(0);
    for (std::size_t s = 0; s < n; ++s) {
      if ((mask >> s) & 1U) {
        value += row[s];
      } else {
        value -= row[s];
      }
    }
    const S x_t = ((mask >> t) & 1U) ? S(1) : S(-1);
    best = max_of(best, abs_of(S(x_t * value)));
  }
  return best;
}

}  // namespace

template <class S>
S numerical_radius_bruteforce(const OperatorTable<S>& T, std::size_t cap) {
  require(T.size() <= cap, "numerical radius brute force: " + std::to_string(T.size()) +
                               " points exceed the cap of " + std::to_string(cap));
  if (T.size() == 0) return S(0);
  const long long patterns = 1LL << T.size();
  S best(0);
#pragma omp parallel if (patterns >= 256)
  {
    S local(0);
#pragma omp for schedule(static) nowait
    for (long long mask = 0; mask < patterns; ++mask) {
      local = max_of(local, best_for_pattern(T, static_cast<std::uint64_t>(mask)));
    }
#pragma omp critical(mcomp_radius_merge)
    best = max_of(best, local);
  }
  return best;
}

namespace reference {

template <class S>
S numerical_radius_serial(const OperatorTable<S>& T, std::size_t cap) {
  require(T.size() <= cap, "numerical radius brute force: size exceeds cap");
  const std::size_t n = T.size();
  S best(0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    GridFunction<S> x(T.points());
    for (std::size_t s = 0; s < n; ++s) x[s] = ((mask >> s) & 1U) ? S(1) : S(-1);
    const GridFunction<S> tx = apply(T, x);
    for (std::size_t t = 0; t < n; ++t) {
      for (int sign : {1, -1}) {
        // x* = sign·δ_t must satisfy x*(x) = 1.
        if (!eq(S(S(sign) * x[t]), S(1))) continue;
        best = max_of(best, abs_of(S(S(sign) * tx[t])));
      }
    }
  }
  return best;
}

}  // namespace reference

template <class S>
OperatorRepair<S> bpb_repair_operator(const OperatorTable<S>& T, const GridFunction<S>& f,
                                      const AtomicMeasure<S>& mu, const S& eps) {
  require(sign_of(eps) > 0 && lt(eps, S(1)), "repair operator: requires 0 < eps < 1");
  require(T.points() == f.points() && f.same_domain(mu), "repair operator: point set mismatch");
  require(eq(operator_norm(T), S(1)), "repair operator: requires nu(T) = 1");
  require(eq(sup_norm(f), S(1)), "repair operator: requires |f| = 1");
  require(eq(variation_norm(mu), S(1)), "repair operator: requires |mu| = 1");
  require(eq(pairing(mu, f), S(1)), "repair operator: requires mu(f) = 1");
  const GridFunction<S> tf = apply(T, f);
  require(ge(pairing(mu, tf), S(S(1) - operator_gate(eps))),
          "repair operator: requires mu(Tf) >= 1 - (eps/6)^4");

  // Functional repair of (Tf, μ) at level δ = ε²/7.
  const S delta = S(eps * eps) / S(7);
  const FunctionalRepair<S> step1 = bpb_repair_functional(tf, mu, delta);
  const AtomicMeasure<S>& mu0 = step1.mu0;
  ensure(eq(pairing(mu0, f), S(1)), "repair operator: mu0(f) != 1");

  const S near_one = S(1) - delta;
  S in_d1(0);
  S in_d2(0);
  S variation_on_d(0);
  for (std::size_t t = 0; t < T.size(); ++t) {
    if (ge(tf[t], near_one)) {
      in_d1 += mu0[t];
      variation_on_d += abs_of(mu0[t]);
    } else if (le(tf[t], S(-near_one))) {
      in_d2 += mu0[t];
      variation_on_d += abs_of(mu0[t]);
    }
  }
  ensure(eq(variation_on_d, S(1)), "repair operator: |mu0|(D1 u D2) != 1");
  ensure(eq(S(in_d1 - in_d2), S(1)), "repair operator: mu0(D1) - mu0(D2) != 1");

  // Ramps g1 ∈ [0,1] and g2 ∈ [−1,0] between 1−ε²/6 and 1−δ.
  const S band_low = S(1) - functional_gate(eps);
  const S band_width = near_one - band_low;
  std::vector<S> g1(T.size(), S(0));
  std::vector<S> g2(T.size(), S(0));
  std::vector<std::size_t> a1;
  std::vector<std::size_t> a2;
  std::vector<AtomicMeasure<S>> family_f;
  std::vector<AtomicMeasure<S>> family_g;
  for (std::size_t t = 0; t < T.size(); ++t) {
    g1[t] = clamp_unit(S((tf[t] - band_low) / band_width));
    g2[t] = -clamp_unit(S((-tf[t] - band_low) / band_width));
    if (ge(tf[t], band_low)) {
      a1.push_back(t);
      family_f.push_back(T.row(t));
    } else if (le(tf[t], S(-band_low))) {
      a2.push_back(t);
      family_g.push_back(-T.row(t));
    }
  }

  // Round f, then project the rows over A1 and the negated rows over A2.
  OperatorRepair<S> repair;
  repair.f0 = round_function(f, eps, default_rounding_delta(eps));
  const auto projected_f = project_family(f, repair.f0, family_f, eps);
  const auto projected_g = project_family(f, repair.f0, family_g, eps);

  // Blend.
  std::vector<AtomicMeasure<S>> rows = T.rows();
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const std::size_t t = a1[i];
    rows[t] = T.row(t) + g1[t] * (projected_f[i] - T.row(t));
  }
  for (std::size_t i = 0; i < a2.size(); ++i) {
    const std::size_t t = a2[i];
    rows[t] = T.row(t) + g2[t] * (projected_g[i] + T.row(t));
  }
  for (const auto& r : rows) repair.max_blended_row_norm = max_of(repair.max_blended_row_norm, variation_norm(r));

  repair.T0 = OperatorTable<S>(T.points(), std::move(rows));
  repair.mu0 = mu0;
  repair.radius = operator_norm(repair.T0);
  repair.pairing_value = pairing(repair.mu0, apply(repair.T0, repair.f0));
  repair.operator_distance = operator_norm(T - repair.T0);
  repair.function_distance = sup_norm(GridFunction<S>(f - repair.f0));
  repair.measure_distance = variation_norm(AtomicMeasure<S>(mu - repair.mu0));
  repair.f0_norm = sup_norm(repair.f0);
  repair.mu0_norm = variation_norm(repair.mu0);
  return repair;
}

bool operator_gate_selftest() {
  // (ε/6)⁴ = ε⁴/1296 and (ε²/7)²/6 = ε⁴/294.
  const Rational lhs(1, 1296);
  const Rational rhs(1, 294);
  if (!(lhs < rhs)) return false;
  for (const Rational& eps : {Rational(1, 100), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(99, 100)}) {
    const Rational d = eps * eps / 7;
    if (!(operator_gate(eps) <= functional_gate(d))) return false;
  }
  return true;
}

NearAttainingInstance<Rational> make_near_attaining(std::uint64_t seed, std::size_t size, const Rational& eps,
                                                    const Rational& strength) {
  require(size >= 1, "make_near_attaining: size must be positive");
  require(eps > 0 && eps < 1, "make_near_attaining: requires 0 < eps < 1");
  require(strength >= 0 && strength <= 1, "make_near_attaining: strength must lie in [0, 1]");
  constexpr long kEntryBound = 50;
  Rng rng(seed);

  PointSet points;
  for (std::size_t i = 0; i < size; ++i) points.push_back("p" + std::to_string(i));

  std::vector<std::vector<Rational>> m(size, std::vector<Rational>(size));
  for (auto& row : m) {
    for (auto& x : row) x = rng.coin() ? rng.rational(kEntryBound) : Rational(0);
  }

  const std::size_t star = rng.index(size);
  auto& top = m[star];
  if (size > 1) {
    bool off_diagonal = false;
    for (std::size_t j = 0; j < size; ++j) off_diagonal |= (j != star && top[j] != 0);
    if (!off_diagonal) top[(star + 1) % size] = 1;
  } else if (top[0] == 0) {
    top[0] = 1;
  }
  if (top[star] < 0) {
    for (auto& x : top) x = -x;
  }

  auto row_norm = [](const std::vector<Rational>& row) {
    Rational s = 0;
    for (const auto& x : row) s += abs(x);
    return s;
  };
  Rational max_norm = 0;
  for (const auto& row : m) max_norm = std::max(max_norm, row_norm(row));
  for (auto& row : m) {
    for (auto& x : row) x /= max_norm;
  }
  {
    const Rational n_top = row_norm(top);
    for (auto& x : top) x /= n_top;
  }

  // Some rows become near copies of ±row*, so that Tf lands near ±1 there.
  const Rational kappa_cap = eps * eps / 8;
  for (std::size_t t = 0; t < size; ++t) {
    if (t == star || !rng.coin()) continue;
    const Rational kappa = kappa_cap * rng.unit(1000);
    const Rational sign = rng.coin() ? Rational(1) : Rational(-1);
    std::vector<Rational> noise = rng.signed_vector_with_norm(size, Rational(1), kEntryBound);
    for (std::size_t s = 0; s < size; ++s) m[t][s] = sign * ((1 - kappa) * top[s] + kappa * noise[s]);
  }

  const Rational s = rng.coin() ? Rational(1) : Rational(-1);
  std::vector<Rational> f(size);
  for (std::size_t j = 0; j < size; ++j) {
    if (j == star) {
      f[j] = s;
    } else if (top[j] != 0) {
      f[j] = s * sgn(top[j]);
    } else {
      f[j] = 2 * rng.unit(100) - 1;
    }
  }

  // Shrink f off the attaining point; each unit of shrink at j costs |row*(j)|
  // in μ(T f).
  const Rational budget = strength * operator_gate(eps) * rng.unit(1000);
  std::vector<std::size_t> movable;
  for (std::size_t j = 0; j < size; ++j) {
    if (j != star && top[j] != 0) movable.push_back(j);
  }
  if (!movable.empty() && budget > 0) {
    std::vector<Rational> share(movable.size());
    Rational share_total = 0;
    for (auto& x : share) {
      x = rng.integer(1, 10);
      share_total += x;
    }
    for (std::size_t i = 0; i < movable.size(); ++i) {
      const std::size_t j = movable[i];
      Rational shrink = budget * share[i] / share_total / abs(top[j]);
      if (shrink > 1) shrink = 1;
      f[j] *= 1 - shrink;
    }
  }

  std::vector<AtomicMeasure<Rational>> rows;
  rows.reserve(size);
  for (auto& row : m) rows.emplace_back(points, std::move(row));
  NearAttainingInstance<Rational> inst{OperatorTable<Rational>(points, std::move(rows)),
                                       GridFunction<Rational>(points, std::move(f)),
                                       AtomicMeasure<Rational>(points)};
  inst.mu[star] = s;
  return inst;
}

#define MCOMP_INSTANTIATE_OPERATOR(S)                                                                       \
  template class OperatorTable<S>;                                                                         \
  template GridFunction<S> apply(const OperatorTable<S>&, const GridFunction<S>&);                         \
  template S operator_norm(const OperatorTable<S>&);                                                       \
  template S numerical_radius_bruteforce(const OperatorTable<S>&, std::size_t);                            \
  template S reference::numerical_radius_serial(const OperatorTable<S>&, std::size_t);                     \
  template OperatorRepair<S> bpb_repair_operator(const OperatorTable<S>&, const GridFunction<S>&,          \
                                                 const AtomicMeasure<S>&, const S&);

MCOMP_INSTANTIATE_OPERATOR(Rational)
MCOMP_INSTANTIATE_OPERATOR(double)

}  // namespace mcomp
