#include "mcomp/bpb_functional.hpp"

#include <optional>

namespace mcomp {

namespace {

template <class S>
void require_bump_params(const S& sigma, const S& eps) {
  require(sign_of(sigma) > 0, "bump: sigma must be positive");
  require(lt(sigma, eps), "bump: sigma must be smaller than eps");
}

template <class S>
void require_split_params(const S& sigma, const S& eps) {
  require_bump_params(sigma, eps);
  require(lt(eps, S(1)), "split: eps must be smaller than 1");
}

template <class S>
InequalityCheck make_check(std::string name, const S& lhs, const char* relation, const S& rhs) {
  const bool at_most = std::string(relation) == "<=";
  const S slack = at_most ? S(rhs - lhs) : S(lhs - rhs);
  return InequalityCheck{std::move(name), format_scalar(lhs), relation, format_scalar(rhs),
                         format_scalar(slack), sign_of(slack) >= 0};
}

}  // namespace

template <class S>
GridFunction<S> bump_u(const GridFunction<S>& f, const S& sigma, const S& eps) {
  require_bump_params(sigma, eps);
  const S low = S(1) - eps;
  const S width = eps - sigma;
  GridFunction<S> u(f.points());
  for (std::size_t i = 0; i < f.size(); ++i) u[i] = clamp_unit(S((f[i] - low) / width));
  return u;
}

template <class S>
GridFunction<S> bump_v(const GridFunction<S>& f, const S& sigma, const S& eps) {
  require_bump_params(sigma, eps);
  const S low = S(1) - eps;
  const S width = eps - sigma;
  GridFunction<S> v(f.points());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = clamp_unit(S((-f[i] - low) / width));
  return v;
}

template <class S>
SplitPair<S> split_measure(const AtomicMeasure<S>& mu, const GridFunction<S>& f, const S& sigma, const S& eps) {
  require_split_params(sigma, eps);
  require(mu.same_domain(f), "split_measure: point set mismatch");
  return SplitPair<S>{density_multiply(mu, bump_u(f, sigma, eps)), density_multiply(mu, bump_v(f, sigma, eps))};
}

template <class S>
BasicLemmaReport<S> basiclemma_check(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& sigma,
                                     const S& eps) {
  require_split_params(sigma, eps);
  require(le(sup_norm(f), S(1)), "basiclemma_check: requires sup norm of f at most 1");
  require(le(variation_norm(mu), S(1)), "basiclemma_check: requires variation norm of mu at most 1");

  const SplitPair<S> split = split_measure(mu, f, sigma, eps);
  BasicLemmaReport<S> report;
  report.pairing_value = pairing(mu, f);
  report.bound = (S(1) - report.pairing_value) / sigma;

  const S n1 = variation_norm(split.mu1);
  const S n2 = variation_norm(split.mu2);
  report.checks.push_back(make_check("(i) |mu1| <= 1", n1, "<=", S(1)));
  report.checks.push_back(make_check("(i) |mu2| <= 1", n2, "<=", S(1)));
  report.checks.push_back(make_check("(ii) |mu1+| + |mu2-| >= 1 - bound",
                                     S(positive_mass(split.mu1) + negative_mass(split.mu2)), ">=",
                                     S(S(1) - report.bound)));
  report.checks.push_back(make_check("(iii) |mu1-| + |mu2+| <= bound",
                                     S(negative_mass(split.mu1) + positive_mass(split.mu2)), "<=",
                                     report.bound));
  const AtomicMeasure<S> rest = mu - split.mu1 - split.mu2;
  report.checks.push_back(make_check("(iv) |mu - mu1 - mu2| <= bound", variation_norm(rest), "<=", report.bound));
  return report;
}

template <class S>
GridFunction<S> round_function(const GridFunction<S>& f, const S& eps, const S& delta) {
  const S norm = sup_norm(f);
  require(le(norm, S(1)), "round_function: requires sup norm of f at most 1");
  require(lt(S(S(1) - norm), eps), "round_function: requires 1 - |f| < eps");
  require(lt(eps, delta), "round_function: requires eps < delta");
  require(lt(delta, S(1)), "round_function: requires delta < 1");

  const S top = S(1) - eps;      // plateau threshold
  const S inner = S(1) - delta;  // identity threshold
  const S gap = delta - eps;
  GridFunction<S> f0(f.points());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const S& x = f[i];
    if (ge(x, top)) {
      f0[i] = S(1);
    } else if (le(x, S(-top))) {
      f0[i] = S(-1);
    } else if (le(abs_of(x), inner)) {
      f0[i] = x;
    } else if (sign_of(x) > 0) {
      f0[i] = x + eps * (x - inner) / gap;
    } else {
      f0[i] = x - eps * (-x - inner) / gap;
    }
  }
  return f0;
}

template <class S>
std::vector<AtomicMeasure<S>> project_family(const GridFunction<S>& f, const GridFunction<S>& f0,
                                             const std::vector<AtomicMeasure<S>>& family, const S& eps) {
  require(sign_of(eps) > 0 && lt(eps, S(1)), "project_family: requires 0 < eps < 1");
  require(f.same_domain(f0), "project_family: f and f0 live on different point sets");
  const S threshold = S(1) - functional_gate(eps);
  for (std::size_t t = 0; t < family.size(); ++t) {
    require(family[t].same_domain(f), "project_family: member " + std::to_string(t) + " has a different point set");
    require(le(variation_norm(family[t]), S(1)),
            "project_family: member " + std::to_string(t) + " is outside the unit ball");
    require(ge(pairing(family[t], f), threshold),
            "project_family: member " + std::to_string(t) + " pairs below 1 - eps^2/6");
  }

  const S sigma = S(5) * eps / S(6);
  const S norm_floor = S(1) - S(2) * eps / S(5);
  std::vector<AtomicMeasure<S>> out(family.size());
  std::vector<std::optional<std::string>> failures(family.size());
  const auto count = static_cast<long long>(family.size());
#pragma omp parallel for schedule(dynamic) if (count >= 8)
  for (long long t = 0; t < count; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    const SplitPair<S> split = split_measure(family[idx], f, sigma, eps);
    const AtomicMeasure<S> xi1 = compensate_single(split.mu1);
    const AtomicMeasure<S> xi2 = compensate_single(AtomicMeasure<S>(-split.mu2));
    AtomicMeasure<S> q = xi1 - xi2;
    const S q_norm = variation_norm(q);
    if (lt(q_norm, norm_floor)) {
      failures[idx] = "project_family: |Q| = " + format_scalar(q_norm) + " below 1 - 2eps/5 at member " +
                      std::to_string(idx);
      continue;
    }
    q /= q_norm;
    out[idx] = std::move(q);
  }
  for (const auto& failure : failures) {
    if (failure) throw InvariantError(*failure);
  }
  return out;
}

template <class S>
FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& eps) {
  return bpb_repair_functional(f, mu, eps, default_rounding_delta(eps));
}

template <class S>
FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& eps,
                                          const S& delta) {
  require(sign_of(eps) > 0 && lt(eps, S(1)), "repair functional: requires 0 < eps < 1");
  require(mu.same_domain(f), "repair functional: point set mismatch");
  require(le(sup_norm(f), S(1)), "repair functional: requires sup norm of f at most 1");
  require(le(variation_norm(mu), S(1)), "repair functional: requires variation norm of mu at most 1");
  require(ge(pairing(mu, f), S(S(1) - functional_gate(eps))), "repair functional: requires mu(f) >= 1 - eps^2/6");

  FunctionalRepair<S> repair;
  repair.f0 = round_function(f, eps, delta);
  repair.mu0 = project_family(f, repair.f0, std::vector<AtomicMeasure<S>>{mu}, eps).front();
  repair.function_distance = sup_norm(GridFunction<S>(f - repair.f0));
  repair.measure_distance = variation_norm(AtomicMeasure<S>(mu - repair.mu0));
  repair.pairing_value = pairing(repair.mu0, repair.f0);
  repair.mu0_norm = variation_norm(repair.mu0);
  repair.f0_norm = sup_norm(repair.f0);
  return repair;
}

#define MCOMP_INSTANTIATE_FUNCTIONAL(S)                                                                    \
  template GridFunction<S> bump_u(const GridFunction<S>&, const S&, const S&);                             \
  template GridFunction<S> bump_v(const GridFunction<S>&, const S&, const S&);                             \
  template SplitPair<S> split_measure(const AtomicMeasure<S>&, const GridFunction<S>&, const S&, const S&); \
  template BasicLemmaReport<S> basiclemma_check(const GridFunction<S>&, const AtomicMeasure<S>&, const S&, \
                                                const S&);                                                 \
  template GridFunction<S> round_function(const GridFunction<S>&, const S&, const S&);                     \
  template std::vector<AtomicMeasure<S>> project_family(const GridFunction<S>&, const GridFunction<S>&,    \
                                                        const std::vector<AtomicMeasure<S>>&, const S&);  \
  template FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>&, const AtomicMeasure<S>&,      \
                                                     const S&);                                            \
  template FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>&, const AtomicMeasure<S>&,      \
                                                     const S&, const S&);

MCOMP_INSTANTIATE_FUNCTIONAL(Rational)
MCOMP_INSTANTIATE_FUNCTIONAL(double)

}  // namespace mcomp
