#include "mcomp/measure.hpp"

#include <set>

namespace mcomp {

void check_distinct_labels(const PointSet& points) {
  std::set<std::string> seen;
  for (const auto& p : points) {
    if (!seen.insert(p).second) throw ParseError("duplicate point label '" + p + "'");
  }
}

template <class S>
S total_mass(const AtomicMeasure<S>& mu) {
  S sum(0);
  for (const auto& w : mu.values()) sum += w;
  return sum;
}

template <class S>
JordanParts<S> jordan(const AtomicMeasure<S>& mu) {
  JordanParts<S> parts{AtomicMeasure<S>(mu.points()), AtomicMeasure<S>(mu.points())};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const int s = sign_of(mu[i]);
    if (s > 0) parts.positive[i] = mu[i];
    if (s < 0) parts.negative[i] = -mu[i];
  }
  return parts;
}

template <class S>
S variation_norm(const AtomicMeasure<S>& mu) {
  S sum(0);
  for (const auto& w : mu.values()) sum += abs_of(w);
  return sum;
}

template <class S>
S positive_mass(const AtomicMeasure<S>& mu) {
  S sum(0);
  for (const auto& w : mu.values()) {
    if (sign_of(w) > 0) sum += w;
  }
  return sum;
}

template <class S>
S negative_mass(const AtomicMeasure<S>& mu) {
  S sum(0);
  for (const auto& w : mu.values()) {
    if (sign_of(w) < 0) sum -= w;
  }
  return sum;
}

template <class S>
SignPartition hahn(const AtomicMeasure<S>& mu) {
  SignPartition part;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    (sign_of(mu[i]) >= 0 ? part.positive_part : part.negative_part).push_back(i);
  }
  return part;
}

template <class S>
bool is_hahn_partition(const SignPartition& part, const AtomicMeasure<S>& mu) {
  std::vector<int> seen(mu.size(), 0);
  for (auto i : part.positive_part) {
    if (i >= mu.size() || sign_of(mu[i]) < 0) return false;
    ++seen[i];
  }
  for (auto i : part.negative_part) {
    if (i >= mu.size() || sign_of(mu[i]) > 0) return false;
    ++seen[i];
  }
  for (int c : seen) {
    if (c != 1) return false;
  }
  return true;
}

template <class S>
S d_fn(const S& s1, const S& s2) {
  const int a = sign_of(s1);
  const int b = sign_of(s2);
  if (a * b >= 0) return S(0);
  S m = min_of(abs_of(s1), abs_of(s2));
  return b > 0 ? m : S(-m);
}

template <class S>
AtomicMeasure<S> compensate_single(const AtomicMeasure<S>& mu) {
  const S mass = total_mass(mu);
  if (sign_of(mass) <= 0) return AtomicMeasure<S>(mu.points());
  const S lambda = mass / positive_mass(mu);
  AtomicMeasure<S> nu = jordan(mu).positive;
  nu *= lambda;
  return nu;
}

template <class S>
std::optional<std::string> compensation_defect(const AtomicMeasure<S>& mu, const AtomicMeasure<S>& nu) {
  if (!mu.same_domain(nu)) return "point set mismatch";
  const S mass = total_mass(mu);
  if (sign_of(mass) <= 0) {
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (!is_zero(nu[i])) {
        return "mass " + format_scalar(mass) + " <= 0 but weight at '" + nu.points()[i] + "' is " +
               format_scalar(nu[i]);
      }
    }
    return std::nullopt;
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const S upper = max_of(mu[i], S(0));
    if (sign_of(nu[i]) < 0 || gt(nu[i], upper)) {
      return "weight " + format_scalar(nu[i]) + " at '" + nu.points()[i] + "' outside [0, " +
             format_scalar(upper) + "]";
    }
  }
  const S out = total_mass(nu);
  if (!eq(out, mass)) {
    return "mass " + format_scalar(out) + " differs from input mass " + format_scalar(mass);
  }
  return std::nullopt;
}

template <class S>
S pairing(const AtomicMeasure<S>& mu, const GridFunction<S>& f) {
  if (!mu.same_domain(f)) throw PreconditionError("pairing: point set mismatch");
  S sum(0);
  for (std::size_t i = 0; i < mu.size(); ++i) sum += mu[i] * f[i];
  return sum;
}

template <class S>
S attainment_mass(const GridFunction<S>& f, const AtomicMeasure<S>& mu) {
  if (!mu.same_domain(f)) throw PreconditionError("attainment_mass: point set mismatch");
  require(eq(sup_norm(f), S(1)), "attainment_mass: requires sup norm of f equal to 1");
  require(eq(variation_norm(mu), S(1)), "attainment_mass: requires variation norm of mu equal to 1");
  const SignPartition part = hahn(mu);
  S mass(0);
  for (auto i : part.positive_part) {
    if (eq(f[i], S(1))) mass += abs_of(mu[i]);
  }
  for (auto i : part.negative_part) {
    if (eq(f[i], S(-1))) mass += abs_of(mu[i]);
  }
  return mass;
}

template <class S>
AtomicMeasure<S> density_multiply(const AtomicMeasure<S>& mu, const GridFunction<S>& g) {
  if (!mu.same_domain(g)) throw PreconditionError("density_multiply: point set mismatch");
  AtomicMeasure<S> out(mu.points());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[i] * g[i];
  return out;
}

template <class S>
S sup_norm(const GridFunction<S>& f) {
  S best(0);
  for (const auto& v : f.values()) best = max_of(best, abs_of(v));
  return best;
}

template <class S>
std::vector<std::size_t> support(const AtomicMeasure<S>& mu) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!is_zero(mu[i])) out.push_back(i);
  }
  return out;
}

#define MCOMP_INSTANTIATE_MEASURE(S)                                                                \
  template S total_mass(const AtomicMeasure<S>&);                                                   \
  template JordanParts<S> jordan(const AtomicMeasure<S>&);                                          \
  template S variation_norm(const AtomicMeasure<S>&);                                               \
  template S positive_mass(const AtomicMeasure<S>&);                                                \
  template S negative_mass(const AtomicMeasure<S>&);                                                \
  template SignPartition hahn(const AtomicMeasure<S>&);                                             \
  template bool is_hahn_partition(const SignPartition&, const AtomicMeasure<S>&);                   \
  template S d_fn(const S&, const S&);                                                              \
  template AtomicMeasure<S> compensate_single(const AtomicMeasure<S>&);                             \
  template std::optional<std::string> compensation_defect(const AtomicMeasure<S>&,                  \
                                                          const AtomicMeasure<S>&);                 \
  template S pairing(const AtomicMeasure<S>&, const GridFunction<S>&);                              \
  template S attainment_mass(const GridFunction<S>&, const AtomicMeasure<S>&);                      \
  template AtomicMeasure<S> density_multiply(const AtomicMeasure<S>&, const GridFunction<S>&);      \
  template S sup_norm(const GridFunction<S>&);                                                      \
  template std::vector<std::size_t> support(const AtomicMeasure<S>&);

MCOMP_INSTANTIATE_MEASURE(Rational)
MCOMP_INSTANTIATE_MEASURE(double)

}  // namespace mcomp
