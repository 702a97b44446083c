#pragma once

// Local compensation on the one-point compactification A(Γ), Γ = ℕ, for
// fields that are constant outside a finite exceptional set E.
//
// Points of K = Γ ∪ {∞} are longs; kInfinity stands for ∞. A measure is a
// sparse map point → weight (zero weights are never stored).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcomp/measure.hpp"

namespace mcomp {

inline constexpr long kInfinity = -1;

/// "g<k>" or "inf".
std::string agamma_label(long point);

/// Inverse of agamma_label; throws ParseError.
long parse_agamma_label(const std::string& label);

template <class S>
using SparseMeasure = std::map<long, S>;

template <class S>
struct FiniteField {
  /// Γ-labels must be < window.
  long window = 0;
  SparseMeasure<S> f_infinity;
  /// F(t) for t ∈ E; every other t has F(t) = F(∞).
  std::map<long, SparseMeasure<S>> exceptions;

  /// F(t) for t ∈ Γ (or kInfinity).
  const SparseMeasure<S>& at(long t) const;
};

/// Drops zero weights and checks that every label lies in the window.
/// Throws PreconditionError.
template <class S> void normalise_field(FiniteField<S>& F);

struct FieldSets {
  std::vector<long> A;       // exceptions with F(t)(K) ≠ F(∞)(K)
  std::vector<long> gamma0;  // Γ-atoms of F(∞)
  std::map<long, std::vector<long>> B_s;
  std::vector<long> B;  // Γ-members of B; ∞ ∈ B always
  std::vector<long> C_exceptions;
  std::vector<long> branch4;
  bool tail_in_C = true;
};

/// Minimal sets for F with F(∞)(K) ≥ 0 (PreconditionError otherwise).
template <class S> FieldSets derive_sets(const FiniteField<S>& F);

template <class S>
struct FieldCompensation {
  SparseMeasure<S> xi_infinity;
  std::map<long, SparseMeasure<S>> xi_exceptions;
  /// Value at every t ∉ E.
  SparseMeasure<S> xi_tail;
  /// Present when F(∞)(K) ≥ 0.
  std::optional<FieldSets> sets;

  const SparseMeasure<S>& at(long t) const;
};

/// The pointwise-compensating field described above: finite exceptions when
/// F(∞)(K) < 0, the four-branch formula otherwise. Throws InvariantError if a
/// branch-4 denominator is not positive.
template <class S> FieldCompensation<S> agamma_compensate(const FiniteField<S>& F);

/// Definition-level check of a single sparse value.
template <class S>
std::optional<std::string> sparse_compensation_defect(const SparseMeasure<S>& mu, const SparseMeasure<S>& nu);

struct TailReport {
  std::size_t probes = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Along `probe_points` (Γ points): beyond max(E) the value must equal ξ(∞)
/// exactly; inside E, at atoms s ∈ Γ∖Γ₀ the value must lie in [0, F(t)⁺({s})].
/// Every probed value must also be a compensation of F(t).
template <class S>
TailReport continuity_along_tail(const FiniteField<S>& F, const FieldCompensation<S>& xi,
                                 const std::vector<long>& probe_points);

/// Probe sequence: every exception, then `extra` points past max(E) and the window.
template <class S> std::vector<long> default_probes(const FiniteField<S>& F, long extra = 4);

template <class S> S sparse_total(const SparseMeasure<S>& mu);

}  // namespace mcomp
