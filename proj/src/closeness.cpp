#include "mcomp/closeness.hpp"

#include <bit>

#include "mcomp/cantor.hpp"

namespace mcomp {

template <class S>
std::vector<std::string> metric_defects(const std::vector<std::vector<S>>& rho) {
  std::vector<std::string> out;
  const std::size_t n = rho.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (rho[a].size() != n) {
      out.push_back("rho is not square at row " + std::to_string(a));
      return out;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const int s = sign_of(rho[a][b]);
      if (a == b && s != 0) out.push_back("rho(" + std::to_string(a) + "," + std::to_string(a) + ") != 0");
      if (a != b && s <= 0)
        out.push_back("rho(" + std::to_string(a) + "," + std::to_string(b) + ") is not positive");
      if (!eq(rho[a][b], rho[b][a]))
        out.push_back("rho not symmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (gt(rho[a][c], S(rho[a][b] + rho[b][c]))) {
          out.push_back("triangle inequality fails for (" + std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + ")");
        }
      }
    }
  }
  return out;
}

template <class S>
MetricSpaceSample<S>::MetricSpaceSample(PointSet points, std::vector<std::vector<S>> rho)
    : points_(std::move(points)), rho_(std::move(rho)) {
  require(rho_.size() == points_.size(), "metric: need one rho row per point");
  const auto defects = metric_defects(rho_);
  require(defects.empty(), defects.empty() ? std::string() : "metric: " + defects.front());
}

template <class S>
MetricSpaceSample<S> MetricSpaceSample<S>::on_line(PointSet points, const std::vector<S>& coords) {
  require(points.size() == coords.size(), "metric: one coordinate per point");
  std::vector<std::vector<S>> rho(coords.size(), std::vector<S>(coords.size(), S(0)));
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t b = 0; b < coords.size(); ++b) rho[a][b] = abs_of(S(coords[a] - coords[b]));
  }
  return MetricSpaceSample(std::move(points), std::move(rho));
}

template <class S>
S metric_closeness(const MetricSpaceSample<S>& m, std::size_t x, std::size_t y, std::size_t z) {
  require(x < m.size() && y < m.size() && z < m.size(), "closeness: point index out of range");
  require(y != z, "closeness: requires y != z");
  const S& dy = m.rho(x, y);
  const S& dz = m.rho(x, z);
  return S((dz - dy) / max_of(dy, dz));
}

template <class S>
S closeness_from_compensation(const CompensationProcedure<S>& xi, const PointSet& points, std::size_t x,
                              std::size_t y, std::size_t z) {
  require(x < points.size() && y < points.size() && z < points.size(), "closeness: point index out of range");
  require(y != z, "closeness: requires y != z");
  AtomicMeasure<S> f(points);
  const S third = S(1) / S(3);
  f[y] += third;
  f[z] += third;
  f[x] -= third;
  const AtomicMeasure<S> out = xi(f);
  return S(S(1) - S(6) * out[y]);
}

template <class S>
AxiomsReport axioms_check(const ClosenessEvaluator<S>& c, const PointSet& points, const std::vector<Triple>& samples) {
  AxiomsReport report;
  auto name = [&](const Triple& t) {
    return "(" + points.at(t[0]) + "," + points.at(t[1]) + "," + points.at(t[2]) + ")";
  };
  for (const Triple& t : samples) {
    ++report.triples;
    const auto [x, y, z] = t;
    if (y == z) {
      report.violations.push_back("degenerate triple " + name(t) + ": y = z");
      continue;
    }
    const S v = c(x, y, z);
    const S w = c(x, z, y);
    if (!eq(v, S(-w))) {
      report.violations.push_back("antisymmetry " + name(t) + ": c = " + format_scalar(v) +
                                  ", swapped = " + format_scalar(w));
    }
    if (gt(abs_of(v), S(1))) report.violations.push_back("range " + name(t) + ": c = " + format_scalar(v));
    if (x == y && !eq(v, S(1))) {
      report.violations.push_back("normalisation " + name(t) + ": c(x,x,z) = " + format_scalar(v));
    }
  }
  return report;
}

namespace {

Rational cantor_value(unsigned depth, std::size_t x, std::size_t y, std::size_t z) {
  return closeness_from_compensation<Rational>(cantor_procedure<Rational>(), leaf_labels(depth), x, y, z);
}

// Length of the longest common prefix of two depth-n words.
unsigned common_prefix(std::size_t a, std::size_t b, unsigned depth) {
  const std::size_t diff = a ^ b;
  if (diff == 0) return depth;
  return depth - static_cast<unsigned>(std::bit_width(diff));
}

}  // namespace

ContinuitySample cantor_closeness_continuity(unsigned depth, const std::vector<Triple>& samples) {
  require(depth >= 1 && depth < kMaxDyadicDepth, "closeness continuity: depth must be in [1, 23]");
  ContinuitySample report;
  const std::size_t leaves = std::size_t{1} << depth;
  for (const Triple& t : samples) {
    auto [x, y, z] = t;
    require(x < leaves && y < leaves && z < leaves, "closeness continuity: leaf out of range");
    if (y == z) continue;
    const Rational base = cantor_value(depth, x, y, z);
    const std::string where = "(" + leaf_label(x, depth) + "," + leaf_label(y, depth) + "," + leaf_label(z, depth) + ")";

    ++report.probes;
    const Rational refined = cantor_value(depth + 1, x << 1, y << 1, z << 1);
    if (refined != base) {
      report.violations.push_back("refinement changes c at " + where + ": " + format_rational(base) + " vs " +
                                  format_rational(refined));
    }

    // Move each point to the far end of its private cylinder.
    std::array<std::size_t, 3> pts{x, y, z};
    for (std::size_t i = 0; i < 3; ++i) {
      unsigned shared = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != i && pts[j] != pts[i]) shared = std::max(shared, common_prefix(pts[i], pts[j], depth));
      }
      bool coincides = false;
      for (std::size_t j = 0; j < 3; ++j) coincides |= (j != i && pts[j] == pts[i]);
      if (coincides || shared + 1 >= depth) continue;
      const unsigned free_bits = depth - shared - 1;
      std::array<std::size_t, 3> moved = pts;
      moved[i] ^= (std::size_t{1} << free_bits) - 1;
      ++report.probes;
      const Rational v = cantor_value(depth, moved[0], moved[1], moved[2]);
      if (v != base) {
        report.violations.push_back("moving point " + std::to_string(i) + " inside its cylinder changes c at " +
                                    where + ": " + format_rational(base) + " vs " + format_rational(v));
      }
    }
  }
  return report;
}

#define MCOMP_INSTANTIATE_CLOSENESS(S)                                                                    \
  template class MetricSpaceSample<S>;                                                                   \
  template std::vector<std::string> metric_defects(const std::vector<std::vector<S>>&);                  \
  template S metric_closeness(const MetricSpaceSample<S>&, std::size_t, std::size_t, std::size_t);       \
  template S closeness_from_compensation(const CompensationProcedure<S>&, const PointSet&, std::size_t,   \
                                         std::size_t, std::size_t);                                      \
  template AxiomsReport axioms_check(const ClosenessEvaluator<S>&, const PointSet&, const std::vector<Triple>&);

MCOMP_INSTANTIATE_CLOSENESS(Rational)
MCOMP_INSTANTIATE_CLOSENESS(double)

}  // namespace mcomp
