#include "mcomp/agamma.hpp"

#include <algorithm>

namespace mcomp {

std::string agamma_label(long point) {
  return point == kInfinity ? std::string("inf") : "g" + std::to_string(point);
}

long parse_agamma_label(const std::string& label) {
  if (label == "inf") return kInfinity;
  std::string digits = label;
  if (!digits.empty() && digits[0] == 'g') digits.erase(0, 1);
  if (digits.empty() || digits.size() > 12 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("bad A(Gamma) label '" + label + "' (expected g<k>, <k> or inf)");
  }
  return std::stol(digits);
}

template <class S>
S sparse_total(const SparseMeasure<S>& mu) {
  S s(0);
  for (const auto& [p, w] : mu) s += w;
  return s;
}

namespace {

template <class S>
S value_at(const SparseMeasure<S>& mu, long s) {
  auto it = mu.find(s);
  return it == mu.end() ? S(0) : it->second;
}

template <class S>
S positive_total(const SparseMeasure<S>& mu) {
  S s(0);
  for (const auto& [p, w] : mu) {
    if (sign_of(w) > 0) s += w;
  }
  return s;
}

template <class S>
SparseMeasure<S> compensate_sparse(const SparseMeasure<S>& mu) {
  SparseMeasure<S> out;
  const S total = sparse_total(mu);
  if (sign_of(total) <= 0) return out;
  const S lambda = total / positive_total(mu);
  for (const auto& [p, w] : mu) {
    if (sign_of(w) > 0) out.emplace(p, S(lambda * w));
  }
  return out;
}

template <class S>
bool sparse_equal(const SparseMeasure<S>& a, const SparseMeasure<S>& b) {
  for (const auto& [p, w] : a) {
    if (!eq(w, value_at(b, p))) return false;
  }
  for (const auto& [p, w] : b) {
    if (!eq(w, value_at(a, p))) return false;
  }
  return true;
}

bool contains(const std::vector<long>& v, long x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

template <class S>
const SparseMeasure<S>& FiniteField<S>::at(long t) const {
  auto it = exceptions.find(t);
  return it == exceptions.end() ? f_infinity : it->second;
}

template <class S>
const SparseMeasure<S>& FieldCompensation<S>::at(long t) const {
  if (t == kInfinity) return xi_infinity;
  auto it = xi_exceptions.find(t);
  return it == xi_exceptions.end() ? xi_tail : it->second;
}

template <class S>
void normalise_field(FiniteField<S>& F) {
  require(F.window >= 0, "field: window must be non-negative");
  auto clean = [&](SparseMeasure<S>& mu, const std::string& where) {
    for (auto it = mu.begin(); it != mu.end();) {
      require(it->first == kInfinity || (it->first >= 0 && it->first < F.window),
              where + ": atom " + agamma_label(it->first) + " outside the active window");
      it = is_zero(it->second) ? mu.erase(it) : std::next(it);
    }
  };
  clean(F.f_infinity, "f_infinity");
  for (auto& [t, mu] : F.exceptions) {
    require(t >= 0 && t < F.window, "exception at " + std::to_string(t) + " outside the active window");
    clean(mu, "exception " + std::to_string(t));
  }
}

template <class S>
FieldSets derive_sets(const FiniteField<S>& F) {
  const S total_inf = sparse_total(F.f_infinity);
  require(sign_of(total_inf) >= 0, "derive_sets: requires F(inf)(K) >= 0");
  FieldSets sets;
  for (const auto& [s, w] : F.f_infinity) {
    if (s != kInfinity && !is_zero(w)) sets.gamma0.push_back(s);
  }
  for (const auto& [t, mu] : F.exceptions) {
    if (!eq(sparse_total(mu), total_inf)) sets.A.push_back(t);
  }
  for (long s : sets.gamma0) {
    auto& bs = sets.B_s[s];
    for (const auto& [t, mu] : F.exceptions) {
      if (!eq(value_at(mu, s), value_at(F.f_infinity, s))) bs.push_back(t);
    }
  }
  for (const auto& [t, mu] : F.exceptions) {
    bool in_b = contains(sets.A, t);
    for (const auto& [s, bs] : sets.B_s) in_b = in_b || contains(bs, t);
    if (in_b) {
      sets.B.push_back(t);
      continue;
    }
    // F(t)(Γ∖A_∞): Γ-atoms outside the support of F(∞).
    S off_support(0);
    for (const auto& [s, w] : mu) {
      if (s != kInfinity && is_zero(value_at(F.f_infinity, s))) off_support += w;
    }
    (sign_of(off_support) <= 0 ? sets.C_exceptions : sets.branch4).push_back(t);
  }
  return sets;
}

template <class S>
FieldCompensation<S> agamma_compensate(const FiniteField<S>& F) {
  FieldCompensation<S> out;
  if (sign_of(sparse_total(F.f_infinity)) < 0) {
    for (const auto& [t, mu] : F.exceptions) out.xi_exceptions[t] = compensate_sparse(mu);
    return out;
  }

  const FieldSets sets = derive_sets(F);
  const SparseMeasure<S> xi0 = compensate_sparse(F.f_infinity);
  out.xi_infinity = xi0;
  out.xi_tail = xi0;
  for (long t : sets.B) out.xi_exceptions[t] = compensate_sparse(F.exceptions.at(t));
  for (long t : sets.C_exceptions) out.xi_exceptions[t] = xi0;

  const S xi0_inf = value_at(xi0, kInfinity);
  for (long t : sets.branch4) {
    const SparseMeasure<S>& ft = F.exceptions.at(t);
    S denom(0);
    for (const auto& [s, w] : ft) {
      if (!contains(sets.gamma0, s) && sign_of(w) > 0) denom += w;
    }
    ensure(sign_of(denom) > 0, "agamma: branch-4 denominator F(t)+(K \\ Gamma0) is not positive at t = " +
                                   std::to_string(t));
    const S factor = xi0_inf / denom;
    ensure(sign_of(factor) >= 0 && le(factor, S(1)), "agamma: branch-4 scaling factor outside [0, 1] at t = " +
                                                          std::to_string(t));
    SparseMeasure<S> value;
    for (long s : sets.gamma0) {
      const S v = value_at(xi0, s);
      if (!is_zero(v)) value.emplace(s, v);
    }
    for (const auto& [s, w] : ft) {
      if (!contains(sets.gamma0, s) && sign_of(w) > 0 && !is_zero(factor)) value.emplace(s, S(factor * w));
    }
    out.xi_exceptions[t] = std::move(value);
  }
  out.sets = sets;
  return out;
}

template <class S>
std::optional<std::string> sparse_compensation_defect(const SparseMeasure<S>& mu, const SparseMeasure<S>& nu) {
  const S total = sparse_total(mu);
  for (const auto& [p, w] : nu) {
    if (sign_of(w) < 0) return "negative weight " + format_scalar(w) + " at " + agamma_label(p);
    const S cap = max_of(value_at(mu, p), S(0));
    if (gt(w, cap)) return "weight " + format_scalar(w) + " at " + agamma_label(p) + " exceeds mu+ = " + format_scalar(cap);
  }
  const S nu_total = sparse_total(nu);
  if (sign_of(total) > 0) {
    if (!eq(nu_total, total)) return "mass " + format_scalar(nu_total) + " differs from mu(K) = " + format_scalar(total);
  } else if (!is_zero(nu_total)) {
    return "mu(K) <= 0 but the value has mass " + format_scalar(nu_total);
  }
  return std::nullopt;
}

template <class S>
std::vector<long> default_probes(const FiniteField<S>& F, long extra) {
  std::vector<long> probes;
  long last = -1;
  for (const auto& [t, mu] : F.exceptions) {
    probes.push_back(t);
    last = std::max(last, t);
  }
  const long start = std::max(last + 1, F.window);
  for (long i = 0; i < extra; ++i) probes.push_back(start + i);
  return probes;
}

template <class S>
TailReport continuity_along_tail(const FiniteField<S>& F, const FieldCompensation<S>& xi,
                                 const std::vector<long>& probe_points) {
  long last_exception = -1;
  for (const auto& [t, mu] : F.exceptions) last_exception = std::max(last_exception, t);
  require(!probe_points.empty(), "continuity_along_tail: no probe points");
  require(std::all_of(probe_points.begin(), probe_points.end(), [](long t) { return t >= 0; }),
          "continuity_along_tail: probe points must lie in Gamma");
  require(*std::max_element(probe_points.begin(), probe_points.end()) > last_exception,
          "continuity_along_tail: probes must pass every exception");

  TailReport report;
  std::vector<long> gamma0;
  for (const auto& [s, w] : F.f_infinity) {
    if (s != kInfinity) gamma0.push_back(s);
  }
  if (auto d = sparse_compensation_defect(F.f_infinity, xi.xi_infinity)) {
    report.violations.push_back("at inf: " + *d);
  }
  for (long t : probe_points) {
    ++report.probes;
    const SparseMeasure<S>& value = xi.at(t);
    const SparseMeasure<S>& ft = F.at(t);
    if (auto d = sparse_compensation_defect(ft, value)) report.violations.push_back("at g" + std::to_string(t) + ": " + *d);
    if (t > last_exception) {
      if (!sparse_equal(value, xi.xi_infinity)) {
        report.violations.push_back("at g" + std::to_string(t) + ": tail value differs from the value at inf");
      }
      continue;
    }
    for (const auto& [s, w] : value) {
      if (s == kInfinity || contains(gamma0, s)) continue;
      const S cap = max_of(value_at(ft, s), S(0));
      if (sign_of(w) < 0 || gt(w, cap)) {
        report.violations.push_back("at g" + std::to_string(t) + ": atom " + agamma_label(s) + " = " +
                                    format_scalar(w) + " outside [0, F(t)+] = [0, " + format_scalar(cap) + "]");
      }
    }
  }
  return report;
}

#define MCOMP_INSTANTIATE_AGAMMA(S)                                                                         \
  template struct FiniteField<S>;                                                                          \
  template struct FieldCompensation<S>;                                                                    \
  template S sparse_total(const SparseMeasure<S>&);                                                        \
  template void normalise_field(FiniteField<S>&);                                                          \
  template FieldSets derive_sets(const FiniteField<S>&);                                                   \
  template FieldCompensation<S> agamma_compensate(const FiniteField<S>&);                                  \
  template std::optional<std::string> sparse_compensation_defect(const SparseMeasure<S>&,                  \
                                                                 const SparseMeasure<S>&);                 \
  template std::vector<long> default_probes(const FiniteField<S>&, long);                                  \
  template TailReport continuity_along_tail(const FiniteField<S>&, const FieldCompensation<S>&,            \
                                            const std::vector<long>&);

MCOMP_INSTANTIATE_AGAMMA(Rational)
MCOMP_INSTANTIATE_AGAMMA(double)

}  // namespace mcomp
