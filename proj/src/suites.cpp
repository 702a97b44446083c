#include "mcomp/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

#include "mcomp/random.hpp"

namespace mcomp {

namespace {

using io::Json;
using io::to_json;

struct CaseContext {
  std::string suite;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  unsigned depth = 0;
  Rng rng{0};
  Json inputs = Json::object();
  std::size_t checks = 0;
  std::vector<SuiteFailure> failures;

  void expect(bool ok, const std::string& check, const std::string& detail = {}) {
    ++checks;
    if (!ok) failures.push_back(SuiteFailure{suite, index, seed, check, detail, inputs});
  }
};

// ---------- generators (exact) ----------

PointSet point_names(std::size_t n, const char* prefix = "p") {
  PointSet out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Random weights; about one entry in four is zero.
std::vector<Rational> random_weights(Rng& rng, std::size_t n, long bound = 100) {
  std::vector<Rational> w(n);
  for (auto& x : w) x = rng.integer(0, 3) == 0 ? Rational(0) : rng.rational(bound);
  return w;
}

// ‖μ‖ = norm (or 0 if n = 0).
std::vector<Rational> weights_with_norm(Rng& rng, std::size_t n, const Rational& norm) {
  if (n == 0) return {};
  std::vector<Rational> w = random_weights(rng, n);
  Rational total = 0;
  for (const auto& x : w) total += abs(x);
  if (total == 0) {
    w[rng.index(n)] = rng.coin() ? Rational(1) : Rational(-1);
    total = 1;
  }
  for (auto& x : w) x = x * norm / total;
  return w;
}

// Values in [−1, 1] with a good share of exact ±1 and 0.
std::vector<Rational> random_unit_values(Rng& rng, std::size_t n) {
  std::vector<Rational> v(n);
  for (auto& x : v) {
    switch (rng.integer(0, 5)) {
      case 0: x = 1; break;
      case 1: x = -1; break;
      case 2: x = 0; break;
      default: x = 2 * rng.unit(1000) - 1;
    }
  }
  return v;
}

template <class S>
std::vector<S> convert_vector(const std::vector<Rational>& v) {
  std::vector<S> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(from_rational<S>(x));
  return out;
}

template <class S>
AtomicMeasure<S> measure_of(const PointSet& pts, const std::vector<Rational>& w) {
  return AtomicMeasure<S>(pts, convert_vector<S>(w));
}

template <class S>
GridFunction<S> function_of(const PointSet& pts, const std::vector<Rational>& v) {
  return GridFunction<S>(pts, convert_vector<S>(v));
}

template <class S>
std::string show(const S& x) {
  return format_scalar(x);
}

// ---------- compensation-norms ----------

template <class S>
void case_compensation_norms(CaseContext& c) {
  const std::size_t n = c.rng.index(21);
  const PointSet pts = point_names(n);
  const auto w = random_weights(c.rng, n);
  const AtomicMeasure<S> mu = measure_of<S>(pts, w);
  c.inputs = {{"mu", to_json(mu)}};

  const JordanParts<S> jp = jordan(mu);
  c.expect(jp.positive - jp.negative == mu, "jordan reconstructs mu");
  bool singular = true;
  for (std::size_t i = 0; i < n; ++i) {
    singular = singular && sign_of(jp.positive[i]) >= 0 && sign_of(jp.negative[i]) >= 0 &&
               (is_zero(jp.positive[i]) || is_zero(jp.negative[i]));
  }
  c.expect(singular, "jordan parts are non-negative and mutually singular");
  c.expect(eq(variation_norm(mu), S(total_mass(jp.positive) + total_mass(jp.negative))),
           "variation norm = mu+(K) + mu-(K)");
  c.expect(is_hahn_partition(hahn(mu), mu), "hahn gives a sign partition");

  const AtomicMeasure<S> nu = compensate_single(mu);
  const auto defect = compensation_defect(mu, nu);
  c.expect(!defect, "compensate_single is a compensation", defect.value_or(""));
  const S lhs = variation_norm(AtomicMeasure<S>(mu - nu));
  const S rhs = S(2) * variation_norm(jp.negative);
  c.expect(le(lhs, rhs), "|mu - nu| <= 2|mu-|", show(lhs) + " > " + show(rhs));
  c.expect(le(variation_norm(nu), variation_norm(mu)), "|nu| <= |mu|");
}

// ---------- attainment ----------

template <class S>
void case_attainment(CaseContext& c) {
  const std::size_t n = 1 + c.index % 4;
  const PointSet pts = point_names(n);
  std::vector<Rational> magnitude(n);
  for (auto& m : magnitude) m = c.rng.integer(1, 9);
  c.inputs = {{"size", n}, {"magnitudes", Json::array()}};
  for (const auto& m : magnitude) c.inputs["magnitudes"].push_back(format_rational(m));

  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 3;
  auto digit = [](std::size_t code, std::size_t i) {
    for (std::size_t k = 0; k < i; ++k) code /= 3;
    return static_cast<int>(code % 3) - 1;
  };
  for (std::size_t fc = 0; fc < patterns; ++fc) {
    std::vector<Rational> fv(n);
    bool has_unit = false;
    for (std::size_t i = 0; i < n; ++i) {
      fv[i] = digit(fc, i);
      has_unit |= fv[i] != 0;
    }
    if (!has_unit) continue;
    const GridFunction<S> f = function_of<S>(pts, fv);
    for (std::size_t mc = 0; mc < patterns; ++mc) {
      std::vector<Rational> mw(n);
      Rational total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        mw[i] = digit(mc, i) * magnitude[i];
        total += abs(mw[i]);
      }
      if (total == 0) continue;
      for (auto& x : mw) x /= total;
      const AtomicMeasure<S> mu = measure_of<S>(pts, mw);
      const bool attains = eq(pairing(mu, f), S(1));
      const bool full_mass = eq(attainment_mass(f, mu), S(1));
      if (attains != full_mass) {
        c.inputs["f"] = to_json(f);
        c.inputs["mu"] = to_json(mu);
      }
      c.expect(attains == full_mass, "mu(f) = 1 iff attainment mass = 1");
    }
  }
}

// ---------- d-function ----------

template <class S>
void case_d_function(CaseContext& c) {
  Rational r1 = c.rng.rational(50);
  Rational r2 = c.rng.rational(50);
  switch (c.index % 5) {
    case 0: r2 = -r1; break;  // equal magnitudes
    case 1: r1 = 0; break;
    case 2: r2 = 0; break;
    default: break;
  }
  const S s1 = from_rational<S>(r1);
  const S s2 = from_rational<S>(r2);
  c.inputs = {{"s1", show(s1)}, {"s2", show(s2)}};
  const S d = d_fn(s1, s2);
  c.expect(eq(d, S(-d_fn(s2, s1))), "d is antisymmetric");
  if (!is_zero(s1)) {
    const S factor = S(1) + d / s1;
    c.expect(sign_of(factor) >= 0 && le(factor, S(1)), "0 <= 1 + d/s1 <= 1", show(factor));
  }
  const S moved = s1 + d;
  if (sign_of(s1) >= 0) c.expect(sign_of(moved) >= 0 && le(moved, s1), "0 <= s1 + d <= s1");
  if (sign_of(s1) <= 0) c.expect(le(s1, moved) && sign_of(moved) <= 0, "s1 <= s1 + d <= 0");
  if (sign_of(s1) * sign_of(s2) < 0) {
    c.expect(is_zero(moved) || is_zero(S(s2 - d)), "opposite signs: one side is cancelled");
  } else {
    c.expect(is_zero(d), "same signs: d = 0");
  }
}

// ---------- basic-lemma ----------

template <class S>
void case_basic_lemma(CaseContext& c) {
  const std::size_t n = 1 + c.rng.index(20);
  const PointSet pts = point_names(n);
  const Rational eps = c.rng.open_unit(1000);
  const Rational sigma = eps * c.rng.open_unit(1000);
  const Rational norm = c.rng.index(4) == 0 ? Rational(1) : c.rng.unit(1000);
  const GridFunction<S> f = function_of<S>(pts, random_unit_values(c.rng, n));
  const AtomicMeasure<S> mu = measure_of<S>(pts, weights_with_norm(c.rng, n, norm));
  c.inputs = {{"f", to_json(f)}, {"mu", to_json(mu)}, {"sigma", format_rational(sigma)}, {"eps", format_rational(eps)}};

  const auto report = basiclemma_check(f, mu, from_rational<S>(sigma), from_rational<S>(eps));
  for (const auto& check : report.checks) {
    c.expect(check.holds, check.name, check.lhs + " " + check.relation + " " + check.rhs);
  }
  const auto split = split_measure(mu, f, from_rational<S>(sigma), from_rational<S>(eps));
  bool disjoint = true;
  for (std::size_t i = 0; i < n; ++i) disjoint = disjoint && (is_zero(split.mu1[i]) || is_zero(split.mu2[i]));
  c.expect(disjoint, "split measures have disjoint supports");
}

// ---------- rounding ----------

template <class S>
void case_rounding(CaseContext& c) {
  const std::size_t n = 1 + c.rng.index(6);
  const PointSet pts = point_names(n);
  const Rational eps = c.rng.open_unit(100);
  const Rational delta = eps + (1 - eps) * c.rng.open_unit(100);
  std::vector<Rational> fv = random_unit_values(c.rng, n);
  fv[c.rng.index(n)] = c.rng.coin() ? Rational(1) : Rational(-1);  // ‖f‖ = 1 > 1 − ε
  const GridFunction<S> f = function_of<S>(pts, fv);
  const S e = from_rational<S>(eps);
  const S d = from_rational<S>(delta);
  c.inputs = {{"f", to_json(f)}, {"eps", format_rational(eps)}, {"delta", format_rational(delta)}};

  const GridFunction<S> f0 = round_function(f, e, d);
  c.expect(eq(sup_norm(f0), S(1)), "|f0| = 1");
  c.expect(le(sup_norm(GridFunction<S>(f - f0)), e), "|f - f0| <= eps");
  for (std::size_t i = 0; i < n; ++i) {
    if (ge(f[i], S(S(1) - e))) c.expect(eq(f0[i], S(1)), "f0 = 1 on {f >= 1 - eps}");
    if (le(f[i], S(e - S(1)))) c.expect(eq(f0[i], S(-1)), "f0 = -1 on {f <= -1 + eps}");
    if (le(abs_of(f[i]), S(S(1) - d))) c.expect(eq(f0[i], f[i]), "f0 = f on {|f| <= 1 - delta}");
  }

  // Every norm-one sign-pattern functional attaining at f attains at f0.
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 3;
  for (std::size_t code = 0; code < patterns; ++code) {
    std::vector<Rational> w(n);
    std::size_t k = code;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i, k /= 3) {
      w[i] = static_cast<int>(k % 3) - 1;
      count += w[i] != 0;
    }
    if (count == 0) continue;
    for (auto& x : w) x /= static_cast<long>(count);
    const AtomicMeasure<S> nu = measure_of<S>(pts, w);
    if (eq(pairing(nu, f), S(1))) c.expect(eq(pairing(nu, f0), S(1)), "pi2(f) is contained in pi2(f0)");
  }
}

// ---------- functional-repair ----------

template <class S>
void case_functional_repair(CaseContext& c) {
  const std::size_t n = 1 + c.rng.index(12);
  const PointSet pts = point_names(n);
  const Rational eps = c.rng.open_unit(100);
  const Rational gate = eps * eps / 6;
  const bool boundary = c.index % 4 == 0;
  const Rational norm = boundary ? Rational(1) : 1 - gate * c.rng.unit(100) / 2;
  std::vector<Rational> w = weights_with_norm(c.rng, n, norm);
  std::vector<Rational> fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0) {
      fv[i] = 2 * c.rng.unit(100) - 1;
    } else {
      fv[i] = sgn(w[i]) * (1 - (boundary ? Rational(0) : gate * c.rng.unit(100) / 2));
    }
  }
  if (boundary) {
    // Land exactly on μ(f) = 1 − ε²/6 through the heaviest atom.
    std::size_t heavy = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (abs(w[i]) > abs(w[heavy])) heavy = i;
    }
    fv[heavy] = sgn(w[heavy]) * (1 - gate / abs(w[heavy]));
    for (std::size_t i = 0; i < n; ++i) {
      if (i != heavy && w[i] == 0 && abs(fv[i]) == 1) fv[i] = 0;
    }
    if (abs(fv[heavy]) < 1 && n > 1) {
      // Keep ‖f‖ = 1 somewhere so that 1 − ‖f‖ < ε.
      for (std::size_t i = 0; i < n; ++i) {
        if (i != heavy && w[i] != 0) fv[i] = sgn(w[i]);
      }
    }
  }
  const GridFunction<S> f = function_of<S>(pts, fv);
  const AtomicMeasure<S> mu = measure_of<S>(pts, w);
  const S e = from_rational<S>(eps);
  c.inputs = {{"f", to_json(f)}, {"mu", to_json(mu)}, {"eps", format_rational(eps)}};

  const FunctionalRepair<S> r = bpb_repair_functional(f, mu, e);
  c.expect(eq(r.pairing_value, S(1)), "mu0(f0) = 1", show(r.pairing_value));
  c.expect(eq(r.mu0_norm, S(1)), "|mu0| = 1", show(r.mu0_norm));
  c.expect(eq(r.f0_norm, S(1)), "|f0| = 1", show(r.f0_norm));
  c.expect(le(r.function_distance, e), "|f - f0| <= eps", show(r.function_distance));
  c.expect(le(r.measure_distance, e), "|mu - mu0| <= eps", show(r.measure_distance));
  c.expect(is_hahn_partition(hahn(mu), r.mu0), "a Hahn partition of mu serves mu0");
  bool contained = true;
  for (std::size_t i = 0; i < n; ++i) contained = contained && (!is_zero(r.mu0[i]) ? !is_zero(mu[i]) : true);
  c.expect(contained, "supp mu0 is inside supp mu");
}

// ---------- operator-repair ----------

template <class S>
void case_operator_repair(CaseContext& c) {
  static const Rational kEps[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const std::size_t n = 2 + c.rng.index(11);
  const Rational eps = kEps[c.index % 3];
  const Rational strength = c.index % 5 == 0 ? Rational(0) : c.rng.unit(100);
  const auto inst = make_near_attaining(c.rng.next(), n, eps, strength);
  const OperatorTable<S> T = convert_operator<S>(inst.T);
  const GridFunction<S> f = convert_values<S>(inst.f);
  const AtomicMeasure<S> mu = convert_values<S>(inst.mu);
  const S e = from_rational<S>(eps);
  c.inputs = {{"T", to_json(T)}, {"f", to_json(f)}, {"mu", to_json(mu)}, {"eps", format_rational(eps)}};

  c.expect(eq(operator_norm(T), S(1)), "generator: nu(T) = 1");
  c.expect(eq(pairing(mu, f), S(1)), "generator: mu(f) = 1");
  c.expect(ge(pairing(mu, apply(T, f)), S(S(1) - operator_gate(e))), "generator: mu(Tf) >= 1 - (eps/6)^4");
  if (strength == 0) c.expect(eq(pairing(mu, apply(T, f)), S(1)), "generator: strength 0 attains exactly");

  const OperatorRepair<S> r = bpb_repair_operator(T, f, mu, e);
  c.expect(eq(r.radius, S(1)), "nu(T0) = 1", show(r.radius));
  c.expect(eq(r.pairing_value, S(1)), "mu0(T0 f0) = 1", show(r.pairing_value));
  c.expect(le(r.operator_distance, e), "|T - T0| <= eps", show(r.operator_distance));
  c.expect(le(r.function_distance, e), "|f - f0| <= eps", show(r.function_distance));
  c.expect(le(r.measure_distance, e), "|mu - mu0| <= eps", show(r.measure_distance));
  c.expect(le(r.max_blended_row_norm, S(1)), "blended rows stay in the unit ball");
  if (n <= kBruteForceCap && n <= 8) {
    c.expect(eq(numerical_radius_bruteforce(r.T0), S(1)), "brute-force radius of T0 is 1");
  }
}

// ---------- numerical-index ----------

template <class S>
void case_numerical_index(CaseContext& c) {
  const std::size_t n = 1 + c.rng.index(4);
  const PointSet pts = point_names(n);
  std::vector<AtomicMeasure<S>> rows;
  for (std::size_t t = 0; t < n; ++t) rows.push_back(measure_of<S>(pts, random_weights(c.rng, n, 20)));
  const OperatorTable<S> T(pts, std::move(rows));
  c.inputs = {{"T", to_json(T)}};
  const S norm = operator_norm(T);
  const S brute = numerical_radius_bruteforce(T);
  c.expect(eq(brute, norm), "brute-force radius = operator norm", show(brute) + " vs " + show(norm));
  c.expect(eq(reference::numerical_radius_serial(T), brute), "serial search agrees");
}

// ---------- cantor-lemmas ----------

template <class S>
DyadicMeasure<S> random_dyadic(Rng& rng, unsigned depth, long bound = 100) {
  return DyadicMeasure<S>(depth, convert_vector<S>(random_weights(rng, std::size_t{1} << depth, bound)));
}

std::vector<Rational> random_leaves(Rng& rng, unsigned depth, long bound = 100) {
  return random_weights(rng, std::size_t{1} << depth, bound);
}

template <class S>
void case_cantor_lemmas(CaseContext& c) {
  const unsigned n = static_cast<unsigned>(c.rng.integer(0, c.depth));
  std::vector<Rational> leaves = random_leaves(c.rng, n);
  Rational total = 0;
  for (const auto& x : leaves) total += x;
  switch (c.index % 6) {
    case 0: leaves[c.rng.index(leaves.size())] -= total; break;  // total exactly 0
    case 5: if (total > 0) for (auto& x : leaves) x = -x; break;  // keep negative
    default: if (total < 0) for (auto& x : leaves) x = -x; break;
  }
  const DyadicMeasure<S> mu(n, convert_vector<S>(leaves));
  c.inputs = {{"mu", to_json(mu)}};
  const S tot = mu.total_mass();
  const DyadicMeasure<S> out = compensate_cantor(mu);

  c.expect(out == reference::compensate_cantor_serial(mu), "kernel matches the serial transcription");
  const auto defect = compensation_defect(to_atomic(mu), to_atomic(out));
  c.expect(!defect, "output is a compensation", defect.value_or(""));
  if (sign_of(tot) < 0) {
    c.expect(out == DyadicMeasure<S>(n), "negative total gives zero");
    return;
  }
  if (is_zero(tot)) c.expect(out == DyadicMeasure<S>(n), "zero total gives zero");

  for (unsigned m = 0; m <= n; ++m) {
    c.expect(marginal(out, m) == compensate_cantor(marginal(mu, m)),
             "marginal consistency at depth " + std::to_string(m));
  }

  const CompensationTrace<S> tr = stage_trace(mu);
  c.expect(tr.stages.size() == n + 1 && tr.stages.front() == mu.leaves(), "trace starts at the input");
  if (tr.stages.size() == n + 1) {
    bool last_ok = true;
    for (std::size_t i = 0; i < out.size(); ++i) last_ok = last_ok && eq(tr.stages.back()[i], out[i]);
    c.expect(last_ok, "trace ends at the output");
  }
  for (unsigned k = 0; k <= n && k < tr.stages.size(); ++k) {
    S sum(0);
    for (const auto& x : tr.stages[k]) sum += x;
    c.expect(eq(sum, tot), "stage " + std::to_string(k) + " sums to the total mass", show(sum));
  }
  for (unsigned k = 1; k <= n && k < tr.stages.size(); ++k) {
    const std::size_t block = std::size_t{1} << k;
    const auto& st = tr.stages[k];
    for (std::size_t begin = 0; begin < st.size(); begin += block) {
      bool has_pos = false;
      bool has_neg = false;
      for (std::size_t i = begin; i < begin + block; ++i) {
        has_pos |= sign_of(st[i]) > 0;
        has_neg |= sign_of(st[i]) < 0;
      }
      c.expect(!(has_pos && has_neg), "constant sign on subtrees at stage " + std::to_string(k));
    }
    bool mono = true;
    for (std::size_t i = 0; i < st.size(); ++i) mono = mono && le(abs_of(st[i]), abs_of(tr.stages[k - 1][i]));
    c.expect(mono, "stage magnitudes do not grow at stage " + std::to_string(k));

    // The sibling sums seen at stage k are the raw cylinder masses.
    const auto& sums = tr.sibling_sums[k - 1];
    bool raw = true;
    for (std::size_t tau = 0; tau < sums.size(); ++tau) {
      raw = raw && eq(sums[tau].first, mu.cylinder_mass(n - k + 1, 2 * tau)) &&
            eq(sums[tau].second, mu.cylinder_mass(n - k + 1, 2 * tau + 1));
    }
    c.expect(raw, "sibling sums equal the input cylinder masses at stage " + std::to_string(k));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (sign_of(mu[i]) >= 0) {
      c.expect(sign_of(out[i]) >= 0 && le(out[i], mu[i]), "0 <= output <= m on non-negative leaves");
    } else {
      c.expect(is_zero(out[i]), "output vanishes on negative leaves");
    }
  }
}

// ---------- continuity ----------

template <class S>
void case_continuity(CaseContext& c) {
  const unsigned n = static_cast<unsigned>(c.rng.integer(1, std::max(1u, std::min(c.depth, 6u))));
  std::vector<Rational> leaves = random_leaves(c.rng, n, 20);
  std::vector<Rational> dir = random_leaves(c.rng, n, 20);
  const std::size_t size = leaves.size();
  // Most cases put a zero-mass cylinder into μ.
  std::size_t zero_begin = 0;
  std::size_t zero_end = 0;
  if (c.index % 4 != 3) {
    const unsigned len = static_cast<unsigned>(c.rng.integer(1, n));
    const std::size_t width = std::size_t{1} << (n - len);
    zero_begin = c.rng.index(std::size_t{1} << len) * width;
    zero_end = zero_begin + width;
    Rational s = 0;
    for (std::size_t i = zero_begin; i < zero_end; ++i) s += leaves[i];
    leaves[zero_begin] -= s;
  }
  Rational total = 0;
  for (const auto& x : leaves) total += x;
  if (total <= 0) {
    const std::size_t lift = zero_begin == 0 && zero_end > 0 ? size - 1 : 0;
    leaves[lift] += 1 - total;
  }
  if (c.index % 7 == 0) std::fill(dir.begin(), dir.end(), Rational(0));
  Rational dir_total = 0;
  for (const auto& x : dir) dir_total += x;
  if (dir_total < 0) dir[c.rng.index(size)] -= dir_total;

  const DyadicMeasure<S> mu(n, convert_vector<S>(leaves));
  const DyadicMeasure<S> direction(n, convert_vector<S>(dir));
  c.inputs = {{"mu", to_json(mu)}, {"direction", to_json(direction)}};
  const auto report = continuity_probe(mu, direction, 48);
  std::string why;
  for (const auto& v : report.violations) why += v + "; ";
  c.expect(report.domination_ok, "stage-magnitude domination", why);
  c.expect(report.tail_nonincreasing, "deviations are eventually non-increasing", why);
  c.expect(report.converging(), "deviations shrink towards 0",
           report.tail_deviations.empty() ? "" : show(report.deviations.front()) + " -> " + show(report.tail_deviations.back()));
  if (c.index % 7 == 0) {
    bool zero = true;
    for (const auto& d : report.deviations) zero = zero && is_zero(d);
    for (const auto& d : report.tail_deviations) zero = zero && is_zero(d);
    c.expect(zero, "zero direction gives zero deviations");
  }
}

// ---------- transfer ----------

template <class S>
QuotientSpec<S> random_quotient(Rng& rng, const PointSet& source, const PointSet& target) {
  QuotientSpec<S> q;
  q.source_points = source;
  q.target_points = target;
  q.weights.resize(target.size());
  std::vector<std::size_t> order(source.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  q.phi.assign(source.size(), 0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    q.phi[order[i]] = i < target.size() ? i : rng.index(target.size());
  }
  std::vector<std::vector<std::size_t>> fibers(target.size());
  for (std::size_t t = 0; t < source.size(); ++t) fibers[q.phi[t]].push_back(t);
  for (std::size_t l = 0; l < target.size(); ++l) {
    std::vector<Rational> raw(fibers[l].size());
    Rational sum = 0;
    for (auto& x : raw) {
      x = rng.integer(0, 5);
      sum += x;
    }
    if (sum == 0) {
      raw[0] = 1;
      sum = 1;
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != 0) q.weights[l][fibers[l][i]] = from_rational<S>(raw[i] / sum);
    }
  }
  return q;
}

template <class S>
void case_transfer(CaseContext& c) {
  const std::size_t nk = 1 + c.rng.index(8);
  const std::size_t nl = 1 + c.rng.index(nk);
  const std::size_t nm = 1 + c.rng.index(nl);
  const QuotientSpec<S> q1 = random_quotient<S>(c.rng, point_names(nk, "k"), point_names(nl, "l"));
  const QuotientSpec<S> q2 = random_quotient<S>(c.rng, point_names(nl, "l"), point_names(nm, "m"));
  const AtomicMeasure<S> mu = measure_of<S>(q1.target_points, random_weights(c.rng, nl));
  const AtomicMeasure<S> mu2 = measure_of<S>(q2.target_points, random_weights(c.rng, nm));
  c.inputs = {{"q1", to_json(q1)}, {"q2", to_json(q2)}, {"mu", to_json(mu)}, {"mu2", to_json(mu2)}};

  const RaoReport rao = validate_rao(q1);
  c.expect(rao.ok(), "generated quotient is valid", rao.ok() ? "" : rao.violations.front());
  const CompensationProcedure<S> single = [](const AtomicMeasure<S>& m) { return compensate_single(m); };
  const AtomicMeasure<S> out = transfer_compensation(q1, single, mu);
  const auto defect = compensation_defect(mu, out);
  c.expect(!defect, "transferred value is a compensation", defect.value_or(""));

  const AtomicMeasure<S> lifted = averaging_adjoint(q1, mu);
  c.expect(pushforward(q1, lifted) == mu, "pushforward after adjoint is the identity");
  c.expect(eq(total_mass(lifted), total_mass(mu)), "adjoint preserves total mass");
  const AtomicMeasure<S> pos = jordan(mu).positive;
  bool positive = true;
  const AtomicMeasure<S> lifted_pos = averaging_adjoint(q1, pos);
  for (const auto& x : lifted_pos.values()) positive = positive && sign_of(x) >= 0;
  c.expect(positive, "adjoint preserves positivity");

  const AtomicMeasure<S> twice = transfer_compensation(q2, transferred_procedure(q1, single), mu2);
  const AtomicMeasure<S> once = transfer_compensation(compose(q1, q2), single, mu2);
  c.expect(twice == once, "transfer composes");

  const unsigned n = static_cast<unsigned>(c.rng.integer(0, std::min(c.depth, 8u)));
  const unsigned m = static_cast<unsigned>(c.rng.integer(0, n));
  std::vector<Rational> lw(std::size_t{1} << n);
  for (auto& x : lw) x = c.rng.integer(1, 4);
  const QuotientSpec<S> dq = dyadic_coarsening<S>(n, m, convert_vector<S>(lw));
  const DyadicMeasure<S> dm(m, convert_vector<S>(random_leaves(c.rng, m)));
  c.inputs["dyadic_quotient_depths"] = {n, m};
  c.inputs["dyadic_mu"] = to_json(dm);
  const AtomicMeasure<S> via = transfer_compensation(dq, cantor_procedure<S>(), to_atomic(dm));
  c.expect(via == to_atomic(compensate_cantor(dm)), "dyadic coarsening transfer = direct compensation");
}

// ---------- closeness ----------

template <class S>
void case_closeness(CaseContext& c) {
  const std::size_t n = 2 + c.rng.index(7);
  const PointSet pts = point_names(n);
  std::vector<Rational> coords;
  std::vector<std::vector<S>> rho(n, std::vector<S>(n, S(0)));
  // Points in the plane with the ℓ¹ metric; the offset keeps them distinct.
  std::vector<std::pair<Rational, Rational>> xy;
  for (std::size_t i = 0; i < n; ++i) xy.emplace_back(c.rng.rational(20), c.rng.rational(20) + Rational(i * 100));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      rho[a][b] = from_rational<S>(Rational(abs(xy[a].first - xy[b].first) + abs(xy[a].second - xy[b].second)));
    }
  }
  const MetricSpaceSample<S> space(pts, rho);
  std::vector<Triple> triples;
  for (int i = 0; i < 20; ++i) {
    const std::size_t x = c.rng.index(n);
    const std::size_t y = i % 4 == 0 ? x : c.rng.index(n);
    std::size_t z = c.rng.index(n);
    if (z == y) z = (z + 1) % n;
    triples.push_back({x, y, z});
  }
  c.inputs = {{"space", to_json(space)}, {"triples", Json::array()}};
  for (const auto& t : triples) c.inputs["triples"].push_back({pts[t[0]], pts[t[1]], pts[t[2]]});

  const ClosenessEvaluator<S> metric = [&](std::size_t x, std::size_t y, std::size_t z) {
    return metric_closeness(space, x, y, z);
  };
  auto r1 = axioms_check(metric, pts, triples);
  c.checks += r1.triples;
  c.expect(r1.ok(), "metric closeness axioms", r1.ok() ? "" : r1.violations.front());

  const CompensationProcedure<S> single = [](const AtomicMeasure<S>& m) { return compensate_single(m); };
  const ClosenessEvaluator<S> derived = [&](std::size_t x, std::size_t y, std::size_t z) {
    return closeness_from_compensation(single, pts, x, y, z);
  };
  auto r2 = axioms_check(derived, pts, triples);
  c.checks += r2.triples;
  c.expect(r2.ok(), "closeness derived from compensate_single", r2.ok() ? "" : r2.violations.front());

  const unsigned d = std::max(2u, std::min(c.depth, 6u));
  const PointSet leaves = leaf_labels(d);
  std::vector<Triple> leaf_triples;
  for (int i = 0; i < 10; ++i) {
    const std::size_t x = c.rng.index(leaves.size());
    const std::size_t y = i % 4 == 0 ? x : c.rng.index(leaves.size());
    std::size_t z = c.rng.index(leaves.size());
    if (z == y) z = (z + 1) % leaves.size();
    leaf_triples.push_back({x, y, z});
  }
  const CompensationProcedure<S> cantor = cantor_procedure<S>();
  const ClosenessEvaluator<S> via_cantor = [&](std::size_t x, std::size_t y, std::size_t z) {
    return closeness_from_compensation(cantor, leaves, x, y, z);
  };
  auto r3 = axioms_check(via_cantor, leaves, leaf_triples);
  c.checks += r3.triples;
  c.expect(r3.ok(), "closeness derived from the Cantor recursion", r3.ok() ? "" : r3.violations.front());
  const ContinuitySample cs = cantor_closeness_continuity(d, leaf_triples);
  c.expect(cs.ok(), "sampled continuity of the Cantor closeness", cs.ok() ? "" : cs.violations.front());
}

// ---------- agamma ----------

template <class S>
SparseMeasure<S> random_sparse(Rng& rng, long window, std::size_t atoms, bool with_inf) {
  SparseMeasure<S> mu;
  for (std::size_t i = 0; i < atoms; ++i) {
    const Rational w = rng.rational(10);
    if (w != 0) mu[rng.integer(0, window - 1)] = from_rational<S>(w);
  }
  if (with_inf) {
    const Rational w = rng.rational(10);
    if (w != 0) mu[kInfinity] = from_rational<S>(w);
  }
  return mu;
}

template <class S>
void case_agamma(CaseContext& c) {
  FiniteField<S> F;
  F.window = c.rng.integer(4, 12);
  F.f_infinity = random_sparse<S>(c.rng, F.window, 1 + c.rng.index(3), c.rng.index(3) != 0);
  const int kind = static_cast<int>(c.index % 4);
  if (kind != 3 && sign_of(sparse_total(F.f_infinity)) < 0) {
    for (auto& [p, w] : F.f_infinity) w = -w;
  }
  if (kind == 1 || kind == 3) {
    const std::size_t count = 1 + c.rng.index(4);
    for (std::size_t i = 0; i < count; ++i) {
      F.exceptions[c.rng.integer(0, F.window - 1)] = random_sparse<S>(c.rng, F.window, c.rng.index(4), c.rng.coin());
    }
  }
  if (kind == 2) {
    // Branch-4 exceptions: same Γ₀ atoms and total as F(∞), with positive
    // mass moved from ∞ onto Γ-atoms outside supp F(∞).
    if (F.f_infinity.find(kInfinity) == F.f_infinity.end() || sign_of(F.f_infinity[kInfinity]) <= 0) {
      F.f_infinity[kInfinity] = from_rational<S>(c.rng.integer(1, 5));
    }
    std::vector<long> free_atoms;
    for (long s = 0; s < F.window; ++s) {
      if (F.f_infinity.find(s) == F.f_infinity.end()) free_atoms.push_back(s);
    }
    if (free_atoms.empty()) {
      free_atoms.push_back(F.window);
      ++F.window;
    }
    const std::size_t count = 1 + c.rng.index(3);
    for (std::size_t i = 0; i < count; ++i) {
      SparseMeasure<S> ft = F.f_infinity;
      const S moved = from_rational<S>(c.rng.integer(1, 10)) / S(4);
      const long s = free_atoms[c.rng.index(free_atoms.size())];
      ft[kInfinity] -= moved;
      ft[s] += moved;
      if (c.rng.coin() && free_atoms.size() > 1) {
        const long s2 = free_atoms[c.rng.index(free_atoms.size())];
        if (s2 != s) {
          ft[s2] -= moved / S(2);
          ft[s] += moved / S(2);
        }
      }
      F.exceptions[c.rng.integer(0, F.window - 1)] = ft;
    }
  }
  normalise_field(F);
  c.inputs = {{"field", to_json(F)}};

  const FieldCompensation<S> xi = agamma_compensate(F);
  const TailReport tail = continuity_along_tail(F, xi, default_probes(F));
  c.expect(tail.ok(), "pointwise compensation and tail stabilisation", tail.ok() ? "" : tail.violations.front());
  if (xi.sets) {
    for (long t : xi.sets->branch4) {
      c.expect(eq(sparse_total(xi.at(t)), sparse_total(F.at(t))), "branch-4 mass identity at g" + std::to_string(t));
    }
    if (kind == 2) c.expect(!xi.sets->branch4.empty(), "constructed exceptions land in branch 4");
  }
}

// ---------- registry ----------

using CaseFn = void (*)(CaseContext&);

struct SuiteEntry {
  const char* name;
  CaseFn exact;
  CaseFn floating;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries = {
      {"compensation-norms", case_compensation_norms<Rational>, case_compensation_norms<double>},
      {"attainment", case_attainment<Rational>, case_attainment<double>},
      {"d-function", case_d_function<Rational>, case_d_function<double>},
      {"basic-lemma", case_basic_lemma<Rational>, case_basic_lemma<double>},
      {"rounding", case_rounding<Rational>, case_rounding<double>},
      {"functional-repair", case_functional_repair<Rational>, case_functional_repair<double>},
      {"operator-repair", case_operator_repair<Rational>, case_operator_repair<double>},
      {"numerical-index", case_numerical_index<Rational>, case_numerical_index<double>},
      {"cantor-lemmas", case_cantor_lemmas<Rational>, case_cantor_lemmas<double>},
      {"continuity", case_continuity<Rational>, case_continuity<double>},
      {"transfer", case_transfer<Rational>, case_transfer<double>},
      {"closeness", case_closeness<Rational>, case_closeness<double>},
      {"agamma", case_agamma<Rational>, case_agamma<double>},
  };
  return entries;
}

SuiteReport run_one(const SuiteEntry& entry, const SuiteOptions& opt) {
  SuiteReport report;
  report.suite = entry.name;
  std::vector<std::size_t> indices;
  if (opt.only_case) {
    indices.push_back(*opt.only_case);
  } else {
    for (std::size_t i = 0; i < opt.cases; ++i) indices.push_back(i);
  }
  const CaseFn fn = opt.floating ? entry.floating : entry.exact;
  std::vector<CaseContext> results(indices.size());
  const auto count = static_cast<long long>(indices.size());
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < count; ++k) {
    CaseContext& c = results[static_cast<std::size_t>(k)];
    c.suite = entry.name;
    c.index = indices[static_cast<std::size_t>(k)];
    c.seed = mix_seed(opt.seed, c.index);
    c.depth = opt.depth;
    c.rng = Rng(c.seed);
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(SuiteFailure{c.suite, c.index, c.seed, "no exception", e.what(), c.inputs});
    }
  }
  for (auto& c : results) {
    report.checks += c.checks;
    for (auto& f : c.failures) report.failures.push_back(std::move(f));
  }
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const SuiteFailure& a, const SuiteFailure& b) { return a.case_index < b.case_index; });
  report.cases_run = indices.size();
  return report;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  if (options.name == "all") {
    report.suite = "all";
    for (const auto& entry : registry()) {
      SuiteReport part = run_one(entry, options);
      report.cases_run += part.cases_run;
      report.checks += part.checks;
      for (auto& f : part.failures) report.failures.push_back(std::move(f));
    }
  } else {
    const auto& entries = registry();
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const SuiteEntry& e) { return options.name == e.name; });
    require(it != entries.end(), "unknown suite '" + options.name + "'");
    report = run_one(*it, options);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

io::Json to_json(const SuiteReport& report) {
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"suite", f.suite},
                        {"case", f.case_index},
                        {"case_seed", f.case_seed},
                        {"check", f.check},
                        {"detail", f.detail},
                        {"inputs", f.inputs}});
  }
  return Json{{"suite", report.suite},
              {"cases", report.cases_run},
              {"checks", report.checks},
              {"failed", report.failures.size()},
              {"failures", failures}};
}

}  // namespace mcomp
