#pragma once

// Operators on a finite C(K) and their numerical-radius BPB repair.
//
// An operator T is stored through its adjoint rows: row t is the measure
// T*(δ_t), so (T h)(t) = Σ_s row_t(s)·h(s). On C(K) the numerical radius
// equals the operator norm, which for finite K is the largest row ℓ¹ norm.

#include <cstdint>
#include <vector>

#include "mcomp/bpb_functional.hpp"
#include "mcomp/measure.hpp"

namespace mcomp {

template <class S>
class OperatorTable {
 public:
  OperatorTable() = default;

  /// Zero operator on `points`.
  explicit OperatorTable(PointSet points);

  /// Throws PreconditionError unless every row lives on `points`.
  OperatorTable(PointSet points, std::vector<AtomicMeasure<S>> rows);

  static OperatorTable identity(PointSet points);

  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const AtomicMeasure<S>& row(std::size_t t) const { return rows_[t]; }
  AtomicMeasure<S>& row(std::size_t t) { return rows_[t]; }
  const std::vector<AtomicMeasure<S>>& rows() const { return rows_; }

  OperatorTable operator-(const OperatorTable& rhs) const;

  friend bool operator==(const OperatorTable& a, const OperatorTable& b) {
    return a.points_ == b.points_ && a.rows_ == b.rows_;
  }

 private:
  PointSet points_;
  std::vector<AtomicMeasure<S>> rows_;
};

template <class S>
struct OperatorRepair {
  OperatorTable<S> T0;
  GridFunction<S> f0;
  AtomicMeasure<S> mu0;

  S radius{0};             // ν(T₀)
  S pairing_value{0};      // μ₀(T₀ f₀)
  S operator_distance{0};  // ‖T − T₀‖
  S function_distance{0};  // ‖f − f₀‖∞
  S measure_distance{0};   // ‖μ − μ₀‖₁
  S f0_norm{0};
  S mu0_norm{0};

  /// Largest ‖F̃(t)‖ over the blended rows.
  S max_blended_row_norm{0};

  bool certified(const S& eps) const {
    return eq(radius, S(1)) && eq(pairing_value, S(1)) && eq(f0_norm, S(1)) && eq(mu0_norm, S(1)) &&
           le(operator_distance, eps) && le(function_distance, eps) && le(measure_distance, eps);
  }
};

template <class S>
struct NearAttainingInstance {
  OperatorTable<S> T;
  GridFunction<S> f;
  AtomicMeasure<S> mu;
};

/// (T h)(t) = row_t(h).
template <class S> GridFunction<S> apply(const OperatorTable<S>& T, const GridFunction<S>& h);

/// max_t ‖row_t‖₁.
template <class S> S operator_norm(const OperatorTable<S>& T);

inline constexpr std::size_t kBruteForceCap = 12;

/// max |x*(T x)| over x ∈ {±1}^K and x* = ±δ_t with x*(x) = 1, searched
/// exhaustively (the sign patterns are split across OpenMP threads).
/// Throws PreconditionError above `cap` points.
template <class S> S numerical_radius_bruteforce(const OperatorTable<S>& T, std::size_t cap = kBruteForceCap);

/// (ε/6)⁴.
template <class S>
S operator_gate(const S& eps) {
  const S q = eps / S(6);
  return S(q * q * q * q);
}

/// Numerical-radius BPB repair of (T, f, μ) with ν(T) = 1, (f, μ) ∈ Π and
/// μ(T f) ≥ 1 − (ε/6)⁴. Throws PreconditionError on any gate and
/// InvariantError if an intermediate proof assertion fails.
template <class S>
OperatorRepair<S> bpb_repair_operator(const OperatorTable<S>& T, const GridFunction<S>& f,
                                      const AtomicMeasure<S>& mu, const S& eps);

/// Deterministic near-attaining triple of the given size. `strength` in
/// [0, 1] scales the loss in μ(T f) relative to the (ε/6)⁴ gate; 0 gives an
/// exactly attaining triple.
NearAttainingInstance<Rational> make_near_attaining(std::uint64_t seed, std::size_t size, const Rational& eps,
                                                    const Rational& strength = Rational(1));

/// Checks the arithmetic behind the operator gate: 1/1296 < 1/294, i.e.
/// (ε/6)⁴ ≤ (ε²/7)²/6 for every ε ∈ (0, 1).
bool operator_gate_selftest();

template <class S>
OperatorTable<S> convert_operator(const OperatorTable<Rational>& T) {
  std::vector<AtomicMeasure<S>> rows;
  rows.reserve(T.size());
  for (const auto& r : T.rows()) rows.push_back(convert_values<S>(r));
  return OperatorTable<S>(T.points(), std::move(rows));
}

namespace reference {

/// Single-threaded enumeration of the same search space.
template <class S> S numerical_radius_serial(const OperatorTable<S>& T, std::size_t cap = kBruteForceCap);

}  // namespace reference

}  // namespace mcomp
