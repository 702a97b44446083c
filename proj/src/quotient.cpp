#include "mcomp/quotient.hpp"

#include "mcomp/cantor.hpp"

namespace mcomp {

template <class S>
S QuotientSpec<S>::weight_of(std::size_t t) const {
  const auto& fiber = weights[phi[t]];
  auto it = fiber.find(t);
  return it == fiber.end() ? S(0) : it->second;
}

template <class S>
RaoReport validate_rao(const QuotientSpec<S>& q) {
  RaoReport report;
  auto& v = report.violations;
  const std::size_t nk = q.source_points.size();
  const std::size_t nl = q.target_points.size();
  if (q.phi.size() != nk || q.weights.size() != nl) {
    v.push_back("shape: phi must cover every source point and weights every target point");
    return report;
  }
  for (std::size_t t = 0; t < nk; ++t) {
    if (q.phi[t] >= nl) {
      v.push_back("shape: phi(" + q.source_points[t] + ") is not a target point");
      return report;
    }
  }

  std::vector<bool> hit(nl, false);
  for (std::size_t t = 0; t < nk; ++t) hit[q.phi[t]] = true;
  for (std::size_t l = 0; l < nl; ++l) {
    if (!hit[l]) v.push_back("surjectivity: nothing maps to " + q.target_points[l]);
  }

  for (std::size_t l = 0; l < nl; ++l) {
    S sum(0);
    for (const auto& [t, w] : q.weights[l]) {
      if (t >= nk || q.phi[t] != l) {
        v.push_back("fiber mismatch: weight for " + (t < nk ? q.source_points[t] : std::to_string(t)) +
                    " listed under " + q.target_points[l]);
        continue;
      }
      if (sign_of(w) < 0) v.push_back("positivity: weight of " + q.source_points[t] + " is " + format_scalar(w));
      sum += w;
    }
    if (!eq(sum, S(1))) v.push_back("unit sum: weights over " + q.target_points[l] + " sum to " + format_scalar(sum));
  }

  // u∘C_φ = id on the indicator basis of C(L).
  for (std::size_t l = 0; l < nl; ++l) {
    GridFunction<S> e(q.target_points);
    e[l] = S(1);
    const GridFunction<S> back = average(q, compose_with_phi(q, e));
    if (!(back == e)) v.push_back("u∘C_φ: not the identity on the indicator of " + q.target_points[l]);
  }
  return report;
}

template <class S>
void require_valid(const QuotientSpec<S>& q) {
  const RaoReport r = validate_rao(q);
  require(r.ok(), r.ok() ? std::string() : "invalid quotient: " + r.violations.front());
}

template <class S>
AtomicMeasure<S> pushforward(const QuotientSpec<S>& q, const AtomicMeasure<S>& mu) {
  require(mu.points() == q.source_points, "pushforward: measure is not on the source points");
  AtomicMeasure<S> out(q.target_points);
  for (std::size_t t = 0; t < mu.size(); ++t) out[q.phi[t]] += mu[t];
  return out;
}

template <class S>
AtomicMeasure<S> averaging_adjoint(const QuotientSpec<S>& q, const AtomicMeasure<S>& mu) {
  require(mu.points() == q.target_points, "averaging_adjoint: measure is not on the target points");
  AtomicMeasure<S> out(q.source_points);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = mu[q.phi[t]] * q.weight_of(t);
  return out;
}

template <class S>
GridFunction<S> average(const QuotientSpec<S>& q, const GridFunction<S>& h) {
  require(h.points() == q.source_points, "average: function is not on the source points");
  GridFunction<S> out(q.target_points);
  for (std::size_t l = 0; l < out.size(); ++l) {
    for (const auto& [t, w] : q.weights[l]) {
      if (t < h.size()) out[l] += w * h[t];
    }
  }
  return out;
}

template <class S>
GridFunction<S> compose_with_phi(const QuotientSpec<S>& q, const GridFunction<S>& g) {
  require(g.points() == q.target_points, "compose_with_phi: function is not on the target points");
  GridFunction<S> out(q.source_points);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = g[q.phi[t]];
  return out;
}

template <class S>
AtomicMeasure<S> transfer_compensation(const QuotientSpec<S>& q, const CompensationProcedure<S>& xi,
                                       const AtomicMeasure<S>& mu) {
  require_valid(q);
  return pushforward(q, xi(averaging_adjoint(q, mu)));
}

template <class S>
CompensationProcedure<S> transferred_procedure(QuotientSpec<S> q, CompensationProcedure<S> xi) {
  require_valid(q);
  return [q = std::move(q), xi = std::move(xi)](const AtomicMeasure<S>& mu) {
    return pushforward(q, xi(averaging_adjoint(q, mu)));
  };
}

template <class S>
QuotientSpec<S> compose(const QuotientSpec<S>& q1, const QuotientSpec<S>& q2) {
  require(q1.target_points == q2.source_points, "compose: intermediate point sets differ");
  require_valid(q1);
  require_valid(q2);
  QuotientSpec<S> out;
  out.source_points = q1.source_points;
  out.target_points = q2.target_points;
  out.weights.resize(out.target_points.size());
  for (std::size_t t = 0; t < q1.phi.size(); ++t) {
    const std::size_t mid = q1.phi[t];
    const std::size_t l = q2.phi[mid];
    out.phi.push_back(l);
    const S w = S(q1.weight_of(t) * q2.weight_of(mid));
    if (!is_zero(w)) out.weights[l][t] = w;
  }
  return out;
}

template <class S>
QuotientSpec<S> dyadic_coarsening(unsigned n, unsigned m) {
  return dyadic_coarsening(n, m, std::vector<S>(std::size_t{1} << n, S(1)));
}

template <class S>
QuotientSpec<S> dyadic_coarsening(unsigned n, unsigned m, const std::vector<S>& leaf_weights) {
  require(m <= n, "dyadic_coarsening: target depth exceeds source depth");
  require(n <= kMaxDyadicDepth, "dyadic_coarsening: depth too large");
  const std::size_t leaves = std::size_t{1} << n;
  require(leaf_weights.size() == leaves, "dyadic_coarsening: need one weight per source leaf");
  QuotientSpec<S> q;
  q.source_points = leaf_labels(n);
  q.target_points = leaf_labels(m);
  q.weights.resize(q.target_points.size());
  const unsigned shift = n - m;
  std::vector<S> fiber_sum(q.target_points.size(), S(0));
  for (std::size_t t = 0; t < leaves; ++t) {
    require(sign_of(leaf_weights[t]) >= 0, "dyadic_coarsening: negative leaf weight");
    q.phi.push_back(t >> shift);
    fiber_sum[t >> shift] += leaf_weights[t];
  }
  for (std::size_t t = 0; t < leaves; ++t) {
    const std::size_t l = t >> shift;
    require(sign_of(fiber_sum[l]) > 0, "dyadic_coarsening: fiber " + q.target_points[l] + " has zero weight");
    if (!is_zero(leaf_weights[t])) q.weights[l][t] = leaf_weights[t] / fiber_sum[l];
  }
  return q;
}

#define MCOMP_INSTANTIATE_QUOTIENT(S)                                                                      \
  template struct QuotientSpec<S>;                                                                        \
  template RaoReport validate_rao(const QuotientSpec<S>&);                                                \
  template void require_valid(const QuotientSpec<S>&);                                                    \
  template AtomicMeasure<S> pushforward(const QuotientSpec<S>&, const AtomicMeasure<S>&);                 \
  template AtomicMeasure<S> averaging_adjoint(const QuotientSpec<S>&, const AtomicMeasure<S>&);           \
  template GridFunction<S> average(const QuotientSpec<S>&, const GridFunction<S>&);                       \
  template GridFunction<S> compose_with_phi(const QuotientSpec<S>&, const GridFunction<S>&);              \
  template AtomicMeasure<S> transfer_compensation(const QuotientSpec<S>&, const CompensationProcedure<S>&, \
                                                  const AtomicMeasure<S>&);                               \
  template CompensationProcedure<S> transferred_procedure(QuotientSpec<S>, CompensationProcedure<S>);     \
  template QuotientSpec<S> compose(const QuotientSpec<S>&, const QuotientSpec<S>&);                       \
  template QuotientSpec<S> dyadic_coarsening(unsigned, unsigned);                                         \
  template QuotientSpec<S> dyadic_coarsening(unsigned, unsigned, const std::vector<S>&);

MCOMP_INSTANTIATE_QUOTIENT(Rational)
MCOMP_INSTANTIATE_QUOTIENT(double)

}  // namespace mcomp
