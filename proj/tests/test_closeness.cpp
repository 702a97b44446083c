#include <doctest.h>

#include "mcomp/cantor.hpp"
#include "mcomp/closeness.hpp"
#include "mcomp/random.hpp"

using namespace mcomp;
using Q = Rational;

namespace {

const CompensationProcedure<Q> kSingle = [](const AtomicMeasure<Q>& m) { return compensate_single(m); };

std::vector<Triple> random_triples(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<Triple> out;
  while (out.size() < count) {
    const Triple t{rng.index(n), rng.index(n), rng.index(n)};
    if (t[1] != t[2]) out.push_back(t);
  }
  return out;
}

MetricSpaceSample<Q> random_line(Rng& rng, std::size_t n) {
  PointSet pts;
  std::vector<Q> coords;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back("p" + std::to_string(i));
    coords.push_back(Q(static_cast<long>(i)) + rng.unit(7) / 2);
  }
  return MetricSpaceSample<Q>::on_line(pts, coords);
}

}  // namespace

TEST_CASE("metric closeness on a line") {
  const auto m = MetricSpaceSample<Q>::on_line({"0", "h", "1"}, {Q(0), Q(1, 2), Q(1)});
  CHECK(metric_closeness(m, 0, 1, 2) == Q(1, 2));
  CHECK(metric_closeness(m, 0, 2, 1) == Q(-1, 2));
  CHECK(metric_closeness(m, 0, 0, 2) == 1);
  CHECK(metric_closeness(m, 1, 2, 1) == -1);
  CHECK_THROWS_AS(metric_closeness(m, 0, 1, 1), PreconditionError);
}

TEST_CASE("metric defects") {
  CHECK(metric_defects<Q>({{0, 1}, {1, 0}}).empty());
  CHECK_FALSE(metric_defects<Q>({{0, 1}, {2, 0}}).empty());
  CHECK_FALSE(metric_defects<Q>({{1, 1}, {1, 0}}).empty());
  CHECK_FALSE(metric_defects<Q>({{0, 0}, {0, 0}}).empty());
  CHECK_FALSE(metric_defects<Q>({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}).empty());
  CHECK_FALSE(metric_defects<Q>({{0, -1}, {-1, 0}}).empty());
  CHECK_THROWS_AS(MetricSpaceSample<Q>({"a", "b"}, {{0, 1}, {2, 0}}), PreconditionError);
}

TEST_CASE("closeness from a compensation") {
  const PointSet pts{"x", "y", "z"};
  CHECK(closeness_from_compensation(kSingle, pts, 0, 0, 2) == 1);
  CHECK(closeness_from_compensation(kSingle, pts, 2, 1, 2) == -1);
  CHECK(closeness_from_compensation(kSingle, pts, 0, 1, 2) == 0);
  CHECK_THROWS_AS(closeness_from_compensation(kSingle, pts, 0, 1, 1), PreconditionError);
}

TEST_CASE("axioms hold on samples") {
  Rng rng(88);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 9));
    const auto m = random_line(rng, n);
    const auto triples = random_triples(rng, n, 50);
    const ClosenessEvaluator<Q> metric = [&](std::size_t x, std::size_t y, std::size_t z) {
      return metric_closeness(m, x, y, z);
    };
    const ClosenessEvaluator<Q> derived = [&](std::size_t x, std::size_t y, std::size_t z) {
      return closeness_from_compensation(kSingle, m.points(), x, y, z);
    };
    const auto a = axioms_check(metric, m.points(), triples);
    CHECK(a.ok());
    CHECK(a.triples == 50);
    CHECK(axioms_check(derived, m.points(), triples).ok());
  }

  const auto labels = leaf_labels(4);
  const auto triples = random_triples(rng, labels.size(), 200);
  const ClosenessEvaluator<Q> cantor = [&](std::size_t x, std::size_t y, std::size_t z) {
    return closeness_from_compensation(cantor_procedure<Q>(), labels, x, y, z);
  };
  CHECK(axioms_check(cantor, labels, triples).ok());
}

TEST_CASE("corrupted evaluators are caught") {
  const PointSet pts{"a", "b", "c"};
  const ClosenessEvaluator<Q> flipped = [&](std::size_t x, std::size_t y, std::size_t z) {
    return -closeness_from_compensation(kSingle, pts, x, y, z);
  };
  CHECK_FALSE(axioms_check(flipped, pts, {Triple{0, 0, 2}}).ok());
  const ClosenessEvaluator<Q> constant = [](std::size_t, std::size_t, std::size_t) { return Q(1, 2); };
  CHECK_FALSE(axioms_check(constant, pts, {Triple{0, 1, 2}}).ok());
  const ClosenessEvaluator<Q> big = [](std::size_t, std::size_t y, std::size_t z) { return y < z ? Q(2) : Q(-2); };
  CHECK_FALSE(axioms_check(big, pts, {Triple{0, 1, 2}}).ok());
  const ClosenessEvaluator<Q> fine = [](std::size_t, std::size_t, std::size_t) { return Q(0); };
  CHECK_FALSE(axioms_check(fine, pts, {Triple{0, 1, 1}}).ok());
}

TEST_CASE("sampled continuity of the Cantor closeness") {
  Rng rng(4);
  for (unsigned depth = 2; depth <= 5; ++depth) {
    const auto r = cantor_closeness_continuity(depth, random_triples(rng, std::size_t{1} << depth, 15));
    CHECK(r.sampled_only);
    CHECK(r.ok());
    CHECK(r.probes > 0);
  }
}

TEST_CASE("floating closeness") {
  const auto m = MetricSpaceSample<double>::on_line({"0", "h", "1"}, {0.0, 0.5, 1.0});
  CHECK(metric_closeness(m, 0, 1, 2) == doctest::Approx(0.5));
}
