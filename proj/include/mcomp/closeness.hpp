#pragma once

// Closeness functions c(x, y, z) ∈ [−1, 1] on finite samples: the metric
// formula, the one derived from a compensation procedure, and a sampled
// axiom checker.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mcomp/measure.hpp"

namespace mcomp {

template <class S>
class MetricSpaceSample {
 public:
  MetricSpaceSample() = default;

  /// Throws PreconditionError unless rho is a metric on `points`.
  MetricSpaceSample(PointSet points, std::vector<std::vector<S>> rho);

  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const S& rho(std::size_t a, std::size_t b) const { return rho_[a][b]; }
  const std::vector<std::vector<S>>& matrix() const { return rho_; }

  /// Points on the real line with ρ = |a − b|.
  static MetricSpaceSample on_line(PointSet points, const std::vector<S>& coords);

 private:
  PointSet points_;
  std::vector<std::vector<S>> rho_;
};

/// Reasons `rho` is not a metric on `n` points (empty when it is).
template <class S> std::vector<std::string> metric_defects(const std::vector<std::vector<S>>& rho);

using Triple = std::array<std::size_t, 3>;

/// (ρ(x,z) − ρ(x,y)) / max(ρ(x,y), ρ(x,z)). Requires y ≠ z.
template <class S> S metric_closeness(const MetricSpaceSample<S>& m, std::size_t x, std::size_t y, std::size_t z);

/// 1 − 6·ξ(f)({y}) with f = (δ_y + δ_z − δ_x)/3 on `points`. Requires y ≠ z.
template <class S>
S closeness_from_compensation(const CompensationProcedure<S>& xi, const PointSet& points, std::size_t x,
                              std::size_t y, std::size_t z);

template <class S>
using ClosenessEvaluator = std::function<S(std::size_t, std::size_t, std::size_t)>;

struct AxiomsReport {
  std::size_t triples = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks antisymmetry in (y, z), c(x, x, z) = 1 and the range [−1, 1] on every
/// sampled triple. A triple with y = z is itself reported.
template <class S>
AxiomsReport axioms_check(const ClosenessEvaluator<S>& c, const PointSet& points, const std::vector<Triple>& samples);

/// Finite-difference probe of the closeness derived from the Cantor recursion.
/// Continuity is only sampled here, never certified.
struct ContinuitySample {
  bool sampled_only = true;
  std::size_t probes = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// For each triple of depth-`depth` leaves: the value must not change when all
/// three points are refined to depth+1, nor when one point moves to another
/// leaf of the largest cylinder that avoids the other two points.
ContinuitySample cantor_closeness_continuity(unsigned depth, const std::vector<Triple>& samples);

}  // namespace mcomp
