#pragma once

// Compensation function of the Cantor set, evaluated on finite-depth
// cylinder data.
//
// A depth-n measure is the vector of its 2^n cylinder masses m_σ, σ ∈ {0,1}^n,
// in lexicographic order (σ(1) is the most significant bit of the index). It
// stands for the atomic measure Σ m_σ·δ at the points σ⌢000…; the
// recursion only reads cylinder masses, so every representative gives the
// same output.
//
// The recursion runs n stages over the leaf vector. Stage 1 settles sibling
// pairs; stage k ≥ 2 looks at each subtree of height k, sums the stage k−1
// values of its two halves (s₀, s₁) and, when both are non-zero, rescales the
// halves by 1 + d(s₀,s₁)/s₀ and 1 − d(s₀,s₁)/s₁. Subtrees within one stage are
// independent, which is what the OpenMP kernel exploits.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mcomp/measure.hpp"

namespace mcomp {

template <class S>
class DyadicMeasure {
 public:
  DyadicMeasure() : leaves_(1, S(0)) {}

  /// Zero measure of the given depth.
  explicit DyadicMeasure(unsigned depth);

  /// Throws PreconditionError unless leaves.size() == 2^depth.
  DyadicMeasure(unsigned depth, std::vector<S> leaves);

  unsigned depth() const { return depth_; }
  std::size_t size() const { return leaves_.size(); }
  const std::vector<S>& leaves() const { return leaves_; }
  const S& operator[](std::size_t i) const { return leaves_[i]; }

  S total_mass() const;

  /// Mass of the cylinder N_τ for a word τ of length ≤ depth, given as its
  /// integer index at that length.
  S cylinder_mass(unsigned length, std::size_t word) const;

  friend bool operator==(const DyadicMeasure& a, const DyadicMeasure& b) {
    if (a.depth_ != b.depth_) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!eq(a.leaves_[i], b.leaves_[i])) return false;
    }
    return true;
  }

 private:
  unsigned depth_ = 0;
  std::vector<S> leaves_;
};

/// Largest depth accepted anywhere (2^24 leaves).
inline constexpr unsigned kMaxDyadicDepth = 24;

/// Stage table m^{(k)}_σ for k = 0..n plus the sibling sums used at each stage.
template <class S>
struct CompensationTrace {
  unsigned depth = 0;
  /// stages[k][σ] = m^{(k)}_σ; stages[0] is the input.
  std::vector<std::vector<S>> stages;
  /// sibling_sums[k-1][τ] = (s_{n,τ,0}, s_{n,τ,1}) at stage k, τ of length n−k.
  std::vector<std::vector<std::pair<S, S>>> sibling_sums;
};

/// ξ(μ): zero when μ(C) < 0, otherwise the final stage of the recursion.
template <class S> DyadicMeasure<S> compensate_cantor(const DyadicMeasure<S>& mu);

/// Full stage table. Requires total mass ≥ 0.
template <class S> CompensationTrace<S> stage_trace(const DyadicMeasure<S>& mu);

/// Depth-m coarsening: leaf τ receives the sum of the leaves below τ.
template <class S> DyadicMeasure<S> marginal(const DyadicMeasure<S>& mu, unsigned m);

template <class S>
struct ContinuityReport {
  /// deviations[k-1] = max_σ |ξ(μ + direction/k)_σ − ξ(μ)_σ|.
  std::vector<S> deviations;
  /// Geometric tail: tail_deviations[j-1] is the deviation at k = steps·2^j.
  /// Branch switches of the recursion can keep the linear window flat or
  /// rising, so the limit is judged on this tail.
  std::vector<S> tail_deviations;
  /// max_k k·deviation_k over all probes; reported only, no rate is asserted.
  S empirical_modulus{0};
  /// Second half of the geometric tail is non-increasing.
  bool tail_nonincreasing = true;
  /// Stage monotonicity |m^{(k)}(μ')| ≤ |m^{(k−1)}(μ')| at every probe, and
  /// |Δm^{(k)}_σ| ≤ |Δm^{(k−1)}_σ| wherever σ's half-sum vanishes at μ.
  bool domination_ok = true;
  std::vector<std::string> violations;

  bool converging() const {
    if (!tail_nonincreasing || !domination_ok) return false;
    S peak(0);
    for (const S& d : deviations) peak = max_of(peak, d);
    if (is_zero(peak)) return true;
    return !tail_deviations.empty() && lt(tail_deviations.back(), peak);
  }
};

inline constexpr unsigned kContinuityTailProbes = 16;

/// Probes ξ along μ + direction/k, k = 1..steps, then at k = steps·2^j for
/// j = 1..kContinuityTailProbes. Throws PreconditionError if
/// some probe (or μ itself) has negative total mass.
template <class S>
ContinuityReport<S> continuity_probe(const DyadicMeasure<S>& mu, const DyadicMeasure<S>& direction,
                                     unsigned steps);

/// Binary word of `index` with `depth` letters ("" at depth 0).
std::string leaf_label(std::size_t index, unsigned depth);

/// Labels of all leaves in lexicographic order.
PointSet leaf_labels(unsigned depth);

template <class S> AtomicMeasure<S> to_atomic(const DyadicMeasure<S>& mu);

/// Reads an atomic measure whose labels are exactly the binary words of one
/// length, in any order. Throws PreconditionError otherwise.
template <class S> DyadicMeasure<S> from_atomic(const AtomicMeasure<S>& mu);

/// compensate_cantor as a procedure on atomic measures over binary-word labels.
template <class S> CompensationProcedure<S> cantor_procedure();

namespace reference {

/// Serial transcription of the recursion by prefix matching: for every leaf
/// the two half sums are recomputed from scratch, and stage 1 uses the
/// general rescaling rule. Quadratic in the number of leaves; tests only.
template <class S> DyadicMeasure<S> compensate_cantor_serial(const DyadicMeasure<S>& mu);

}  // namespace reference

template <class S>
DyadicMeasure<S> convert_dyadic(const DyadicMeasure<Rational>& mu) {
  std::vector<S> leaves;
  leaves.reserve(mu.size());
  for (const auto& x : mu.leaves()) leaves.push_back(from_rational<S>(x));
  return DyadicMeasure<S>(mu.depth(), std::move(leaves));
}

}  // namespace mcomp
