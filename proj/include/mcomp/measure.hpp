#pragma once

// Signed measures and functions on finite point sets.
//
// A finite compact K is an ordered list of point labels. Measures on K are
// atomic (one weight per point) and C(K) is just the set of value vectors,
// so both are stored as a label list plus a parallel scalar vector. The tag
// parameter keeps measures and functions from being mixed up.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcomp/errors.hpp"
#include "mcomp/scalar.hpp"

namespace mcomp {

using PointSet = std::vector<std::string>;

/// Throws ParseError if a label repeats.
void check_distinct_labels(const PointSet& points);

template <class S, class Tag>
class PointValues {
 public:
  using scalar_type = S;

  PointValues() = default;

  /// Zero vector on `points`.
  explicit PointValues(PointSet points)
      : points_(std::move(points)), values_(points_.size(), S(0)) {}

  PointValues(PointSet points, std::vector<S> values)
      : points_(std::move(points)), values_(std::move(values)) {
    if (points_.size() != values_.size()) {
      throw PreconditionError("point/value count mismatch");
    }
  }

  const PointSet& points() const { return points_; }
  const std::vector<S>& values() const { return values_; }
  std::vector<S>& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  const S& operator[](std::size_t i) const { return values_[i]; }
  S& operator[](std::size_t i) { return values_[i]; }

  /// Index of `label`, or nullopt.
  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] == label) return i;
    }
    return std::nullopt;
  }

  const S& at(const std::string& label) const {
    auto i = index_of(label);
    if (!i) throw PreconditionError("unknown point '" + label + "'");
    return values_[*i];
  }

  bool same_domain(const PointValues& other) const { return points_ == other.points_; }

  template <class OtherTag>
  bool same_domain(const PointValues<S, OtherTag>& other) const {
    return points_ == other.points();
  }

  PointValues& operator+=(const PointValues& rhs) {
    check_domain(rhs);
    for (std::size_t i = 0; i < size(); ++i) values_[i] += rhs.values_[i];
    return *this;
  }
  PointValues& operator-=(const PointValues& rhs) {
    check_domain(rhs);
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= rhs.values_[i];
    return *this;
  }
  PointValues& operator*=(const S& c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  PointValues& operator/=(const S& c) {
    for (auto& v : values_) v /= c;
    return *this;
  }

  friend PointValues operator+(PointValues lhs, const PointValues& rhs) { return lhs += rhs; }
  friend PointValues operator-(PointValues lhs, const PointValues& rhs) { return lhs -= rhs; }
  friend PointValues operator*(const S& c, PointValues v) { return v *= c; }
  friend PointValues operator/(PointValues v, const S& c) { return v /= c; }
  friend PointValues operator-(PointValues v) {
    for (auto& x : v.values_) x = -x;
    return v;
  }

  /// Exact (rational) or tolerant (double) equality, including the domain.
  friend bool operator==(const PointValues& a, const PointValues& b) {
    if (a.points_ != b.points_) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!eq(a.values_[i], b.values_[i])) return false;
    }
    return true;
  }

 private:
  void check_domain(const PointValues& rhs) const {
    if (!same_domain(rhs)) throw PreconditionError("point set mismatch");
  }

  PointSet points_;
  std::vector<S> values_;
};

struct MeasureTag {};
struct FunctionTag {};

/// μ ∈ M(K): one (possibly zero) weight per point.
template <class S>
using AtomicMeasure = PointValues<S, MeasureTag>;

/// f ∈ C(K).
template <class S>
using GridFunction = PointValues<S, FunctionTag>;

/// Any map sending a measure to a compensation of it (single-measure rule,
/// the dyadic recursion, a transferred procedure, ...).
template <class S>
using CompensationProcedure = std::function<AtomicMeasure<S>(const AtomicMeasure<S>&)>;

/// Hahn decomposition (P, N) as index lists over the point set.
struct SignPartition {
  std::vector<std::size_t> positive_part;
  std::vector<std::size_t> negative_part;
};

template <class S>
struct JordanParts {
  AtomicMeasure<S> positive;
  AtomicMeasure<S> negative;
};

template <class S> S total_mass(const AtomicMeasure<S>& mu);
template <class S> JordanParts<S> jordan(const AtomicMeasure<S>& mu);
template <class S> S variation_norm(const AtomicMeasure<S>& mu);
template <class S> S positive_mass(const AtomicMeasure<S>& mu);
template <class S> S negative_mass(const AtomicMeasure<S>& mu);

/// Zero-weight points go to the positive part.
template <class S> SignPartition hahn(const AtomicMeasure<S>& mu);

/// True when (P, N) is a Hahn decomposition of `mu` and partitions its points.
template <class S> bool is_hahn_partition(const SignPartition& part, const AtomicMeasure<S>& mu);

/// sign(s2)·min(|s1|,|s2|) when s1·s2 < 0, else 0.
template <class S> S d_fn(const S& s1, const S& s2);

/// λ·μ⁺ with λ = μ(K)/μ⁺(K) when μ(K) > 0, the zero measure otherwise.
template <class S> AtomicMeasure<S> compensate_single(const AtomicMeasure<S>& mu);

/// Describes why `nu` fails to be a compensation of `mu`, or nullopt if it is one.
template <class S>
std::optional<std::string> compensation_defect(const AtomicMeasure<S>& mu, const AtomicMeasure<S>& nu);

template <class S> S pairing(const AtomicMeasure<S>& mu, const GridFunction<S>& f);

/// |μ|((f=1 ∩ P) ∪ (f=−1 ∩ N)) with (P, N) = hahn(μ). Requires ‖f‖∞ = 1 and ‖μ‖ = 1.
template <class S> S attainment_mass(const GridFunction<S>& f, const AtomicMeasure<S>& mu);

/// The measure g·dμ.
template <class S> AtomicMeasure<S> density_multiply(const AtomicMeasure<S>& mu, const GridFunction<S>& g);

template <class S> S sup_norm(const GridFunction<S>& f);

/// Indices of points carrying non-zero weight.
template <class S> std::vector<std::size_t> support(const AtomicMeasure<S>& mu);

/// Converts a rational-valued vector to another scalar type.
template <class S, class Tag>
PointValues<S, Tag> convert_values(const PointValues<Rational, Tag>& v) {
  std::vector<S> out;
  out.reserve(v.size());
  for (const auto& x : v.values()) out.push_back(from_rational<S>(x));
  return PointValues<S, Tag>(v.points(), std::move(out));
}

}  // namespace mcomp
