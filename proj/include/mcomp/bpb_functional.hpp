#pragma once

// Bishop-Phelps-Bollobás repair of functionals on a finite C(K).
//
// Given a near-attaining pair (f, μ) the repair rounds f to a norm-one f₀
// whose ±1 level sets contain those of f, splits μ by two bump functions
// supported near f = 1 and f = −1, compensates each piece and renormalises.
// Every Tietze extension is realised as a clamped linear ramp in the value
// of f, so all outputs are deterministic and exact in rational mode.

#include <string>
#include <vector>

#include "mcomp/measure.hpp"

namespace mcomp {

template <class S>
struct SplitPair {
  AtomicMeasure<S> mu1;  // μ·u
  AtomicMeasure<S> mu2;  // μ·v
};

struct InequalityCheck {
  std::string name;
  std::string lhs;
  std::string relation;
  std::string rhs;
  std::string slack;
  bool holds = false;
};

template <class S>
struct BasicLemmaReport {
  S pairing_value{0};
  /// (1 − μ(f))/σ
  S bound{0};
  std::vector<InequalityCheck> checks;
  bool all_hold() const {
    for (const auto& c : checks) {
      if (!c.holds) return false;
    }
    return true;
  }
};

template <class S>
struct FunctionalRepair {
  GridFunction<S> f0;
  AtomicMeasure<S> mu0;
  S function_distance{0};  // ‖f − f₀‖∞
  S measure_distance{0};   // ‖μ − μ₀‖₁
  S pairing_value{0};      // μ₀(f₀)
  S mu0_norm{0};
  S f0_norm{0};

  /// The exact certificates: μ₀(f₀) = ‖μ₀‖ = ‖f₀‖ = 1 and both distances ≤ ε.
  bool certified(const S& eps) const {
    return eq(pairing_value, S(1)) && eq(mu0_norm, S(1)) && eq(f0_norm, S(1)) &&
           le(function_distance, eps) && le(measure_distance, eps);
  }
};

/// clamp((f − (1−ε))/(ε−σ), 0, 1): 1 on {f ≥ 1−σ}, 0 on {f ≤ 1−ε}. Requires 0 < σ < ε.
template <class S> GridFunction<S> bump_u(const GridFunction<S>& f, const S& sigma, const S& eps);

/// Mirror of bump_u around −1.
template <class S> GridFunction<S> bump_v(const GridFunction<S>& f, const S& sigma, const S& eps);

/// (μ·u, μ·v). Requires 0 < σ < ε < 1.
template <class S>
SplitPair<S> split_measure(const AtomicMeasure<S>& mu, const GridFunction<S>& f, const S& sigma, const S& eps);

/// Evaluates the four split inequalities with their slack.
/// Requires ‖f‖∞ ≤ 1, ‖μ‖ ≤ 1 and 0 < σ < ε < 1.
template <class S>
BasicLemmaReport<S> basiclemma_check(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& sigma,
                                     const S& eps);

/// f₀: ±1 on {±f ≥ 1−ε}, f on {|f| ≤ 1−δ}, linear ramp in between.
/// Requires ‖f‖∞ ≤ 1 and 1 − ‖f‖∞ < ε < δ < 1.
template <class S> GridFunction<S> round_function(const GridFunction<S>& f, const S& eps, const S& delta);

/// δ used by round_function when the caller does not pick one.
template <class S>
S default_rounding_delta(const S& eps) {
  return (S(1) + eps) / S(2);
}

/// For each F(t) with F(t)(f) ≥ 1 − ε²/6 and ‖F(t)‖ ≤ 1: splits with σ = 5ε/6,
/// compensates F₁ and −F₂ and returns Q/‖Q‖ with Q = ξ₁ − ξ₂.
/// Throws PreconditionError on a gate failure and InvariantError if
/// ‖Q‖ < 1 − 2ε/5.
template <class S>
std::vector<AtomicMeasure<S>> project_family(const GridFunction<S>& f, const GridFunction<S>& f0,
                                             const std::vector<AtomicMeasure<S>>& family, const S& eps);

/// Repairs (f, μ) with μ(f) ≥ 1 − ε²/6 into an exactly attaining (f₀, μ₀).
/// `delta` defaults to (1+ε)/2.
template <class S>
FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& eps);
template <class S>
FunctionalRepair<S> bpb_repair_functional(const GridFunction<S>& f, const AtomicMeasure<S>& mu, const S& eps,
                                          const S& delta);

/// ε²/6, the functional repair gate.
template <class S>
S functional_gate(const S& eps) {
  return S(eps * eps) / S(6);
}

}  // namespace mcomp
