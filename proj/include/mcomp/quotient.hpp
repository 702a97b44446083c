#pragma once

// Finite quotient maps φ: K → L with a regular averaging operator u given by
// fiber weights, and the transfer of a compensation procedure from K to L:
// ξ̃ = φ_* ∘ ξ ∘ u*.

#include <map>
#include <string>
#include <vector>

#include "mcomp/measure.hpp"

namespace mcomp {

template <class S>
struct QuotientSpec {
  PointSet source_points;
  PointSet target_points;
  /// phi[t] = index in target_points of φ(source t).
  std::vector<std::size_t> phi;
  /// weights[l] = source index → weight, meant to be a probability on φ⁻¹(l).
  std::vector<std::map<std::size_t, S>> weights;

  /// Weight of source point t in its own fiber (0 if not listed).
  S weight_of(std::size_t t) const;
};

struct RaoReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every way `q` fails to describe a quotient map with a regular
/// averaging operator. Violations are tagged "shape", "positivity",
/// "unit sum", "surjectivity", "fiber mismatch" or "u∘C_φ".
template <class S> RaoReport validate_rao(const QuotientSpec<S>& q);

/// Throws PreconditionError with the first violation.
template <class S> void require_valid(const QuotientSpec<S>& q);

/// φ_*μ: sums μ over each fiber.
template <class S> AtomicMeasure<S> pushforward(const QuotientSpec<S>& q, const AtomicMeasure<S>& mu);

/// u*μ: spreads μ({l}) over φ⁻¹(l) with the fiber weights.
template <class S> AtomicMeasure<S> averaging_adjoint(const QuotientSpec<S>& q, const AtomicMeasure<S>& mu);

/// (u h)(l) = Σ_t weight_l(t)·h(t).
template <class S> GridFunction<S> average(const QuotientSpec<S>& q, const GridFunction<S>& h);

/// (C_φ g)(t) = g(φ(t)).
template <class S> GridFunction<S> compose_with_phi(const QuotientSpec<S>& q, const GridFunction<S>& g);

/// φ_*(ξ(u*μ)).
template <class S>
AtomicMeasure<S> transfer_compensation(const QuotientSpec<S>& q, const CompensationProcedure<S>& xi,
                                       const AtomicMeasure<S>& mu);

/// transfer_compensation with q and ξ bound.
template <class S>
CompensationProcedure<S> transferred_procedure(QuotientSpec<S> q, CompensationProcedure<S> xi);

/// φ₂∘φ₁ with weights w₁(t)·w₂(φ₁(t)). Requires q1's targets to be q2's sources.
template <class S> QuotientSpec<S> compose(const QuotientSpec<S>& q1, const QuotientSpec<S>& q2);

/// Depth-n Cantor leaves onto depth-m leaves (m ≤ n) by truncating words,
/// with uniform fiber weights.
template <class S> QuotientSpec<S> dyadic_coarsening(unsigned n, unsigned m);

/// Same map; `leaf_weights` (one non-negative entry per depth-n leaf, positive
/// sum on every fiber) is normalised fiber by fiber.
template <class S>
QuotientSpec<S> dyadic_coarsening(unsigned n, unsigned m, const std::vector<S>& leaf_weights);

template <class S>
QuotientSpec<S> convert_quotient(const QuotientSpec<Rational>& q) {
  QuotientSpec<S> out{q.source_points, q.target_points, q.phi, {}};
  for (const auto& fiber : q.weights) {
    std::map<std::size_t, S> w;
    for (const auto& [t, x] : fiber) w.emplace(t, from_rational<S>(x));
    out.weights.push_back(std::move(w));
  }
  return out;
}

}  // namespace mcomp
