#include <doctest.h>

#include <string>
#include <vector>

#include "mcomp/cantor.hpp"
#include "mcomp/random.hpp"

using namespace mcomp;
using Q = Rational;

namespace {

DyadicMeasure<Q> dy(unsigned depth, const std::vector<std::string>& leaves) {
  std::vector<Q> v;
  for (const auto& s : leaves) v.push_back(parse_rational(s));
  return DyadicMeasure<Q>(depth, std::move(v));
}

DyadicMeasure<Q> random_dyadic(Rng& rng, unsigned depth, bool nonneg_total) {
  std::vector<Q> v(std::size_t{1} << depth);
  for (auto& x : v) x = rng.integer(0, 3) == 0 ? Q(0) : rng.rational(12);
  if (nonneg_total) {
    Q t = 0;
    for (const auto& x : v) t += x;
    if (t < 0) v[rng.index(v.size())] -= t;
  }
  return DyadicMeasure<Q>(depth, std::move(v));
}

struct Frozen {
  unsigned depth;
  std::vector<std::string> in;
  std::vector<std::string> out;
};

// Produced by tests/oracle/cantor_oracle.py.
const std::vector<Frozen> kFrozen = {
  {1, {"1", "0"},
     {"1", "0"}},
  {2, {"4", "-9/2", "2/5", "1/7"},
     {"0", "0", "3/95", "3/266"}},
  {3, {"8/5", "-1/2", "-3/7", "1", "3", "1/3", "-4", "9/7"},
     {"11/10", "0", "0", "4/7", "39/70", "13/210", "0", "0"}},
  {3, {"13/3", "-9/4", "-9/4", "7/2", "2/3", "-1", "1", "-3"},
     {"5/8", "0", "0", "3/8", "0", "0", "0", "0"}},
  {4, {"2369/420", "-1", "1/5", "0", "-6/5", "6", "-6", "-1", "8/3", "-6/5", "-3/4", "3", "-1", "0", "-6/7", "-7/2"},
     {"1949/2033", "0", "84/2033", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"}},
  {5, {"3/7", "-8", "7/6", "-7/2", "-1/2", "-6/5", "3/5", "5/7", "9/5", "-8/5", "9", "6/7", "3/4", "-5/4", "-1/7", "-5/4", "5/2", "1/2", "0", "8/3", "1", "-3", "9/2", "-1/3", "0", "-6/5", "4", "-1/5", "1", "-2/3", "-1/6", "1/5"},
     {"0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "18215/9072", "3643/9072", "0", "3643/1701", "0", "0", "47359/27216", "0", "0", "0", "47359/22680", "0", "3643/13608", "0", "0", "3643/136080"}},
};

}  // namespace

TEST_CASE("hand traces") {
  CHECK(compensate_cantor(dy(1, {"1/2", "-1/5"})) == dy(1, {"3/10", "0"}));

  const auto mu = dy(2, {"2/5", "-1/10", "-3/10", "1/5"});
  CHECK(compensate_cantor(mu) == dy(2, {"1/5", "0", "0", "0"}));
  const auto tr = stage_trace(mu);
  REQUIRE(tr.stages.size() == 3);
  CHECK(tr.stages[0] == mu.leaves());
  CHECK(tr.stages[1] == dy(2, {"3/10", "0", "-1/10", "0"}).leaves());
  CHECK(tr.sibling_sums[1][0].first == Q(3, 10));
  CHECK(tr.sibling_sums[1][0].second == Q(-1, 10));

  CHECK(compensate_cantor(dy(2, {"0", "0", "-1/2", "1/4"})) == DyadicMeasure<Q>(2));
  CHECK(stage_trace(dy(0, {"3"})).stages.size() == 1);
  CHECK_THROWS_AS(stage_trace(dy(1, {"-1", "0"})), PreconditionError);

  CHECK(compensate_cantor(dy(1, {"3/10", "-1/10"})) == dy(1, {"1/5", "0"}));
  CHECK(marginal(compensate_cantor(mu), 1) == compensate_cantor(marginal(mu, 1)));
}

TEST_CASE("marginals") {
  const auto mu = dy(2, {"2/5", "-1/10", "-3/10", "1/5"});
  CHECK(marginal(mu, 1) == dy(1, {"3/10", "-1/10"}));
  CHECK(marginal(mu, 2) == mu);
  CHECK(marginal(mu, 0) == dy(0, {"1/5"}));
  CHECK_THROWS_AS(marginal(mu, 3), PreconditionError);
  CHECK(mu.cylinder_mass(1, 1) == Q(-1, 10));
}

TEST_CASE("frozen oracle values") {
  for (const auto& f : kFrozen) {
    const auto mu = dy(f.depth, f.in);
    CHECK(compensate_cantor(mu) == dy(f.depth, f.out));
    CHECK(reference::compensate_cantor_serial(mu) == dy(f.depth, f.out));
  }
}

TEST_CASE("kernel matches the serial reference") {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const unsigned depth = static_cast<unsigned>(rng.integer(0, 7));
    const auto mu = random_dyadic(rng, depth, i % 3 != 0);
    CHECK(compensate_cantor(mu) == reference::compensate_cantor_serial(mu));
    CHECK(compensate_cantor(convert_dyadic<double>(mu)) == convert_dyadic<double>(compensate_cantor(mu)));
  }
  // Large enough for the parallel branch of the kernel.
  const auto big = random_dyadic(rng, 12, true);
  CHECK(compensate_cantor(big) == reference::compensate_cantor_serial(big));
}

TEST_CASE("structural properties") {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const unsigned n = static_cast<unsigned>(rng.integer(0, 7));
    const auto mu = random_dyadic(rng, n, true);
    const auto tr = stage_trace(mu);
    const auto out = compensate_cantor(mu);
    const Q total = mu.total_mass();

    for (unsigned m = 0; m <= n; ++m) CHECK(marginal(out, m) == compensate_cantor(marginal(mu, m)));
    for (const auto& stage : tr.stages) {
      Q s = 0;
      for (const auto& x : stage) s += x;
      CHECK(s == total);
    }
    for (unsigned k = 1; k <= n; ++k) {
      const std::size_t block = std::size_t{1} << k;
      for (std::size_t start = 0; start < mu.size(); start += block) {
        bool pos = true, neg = true;
        for (std::size_t j = start; j < start + block; ++j) {
          pos = pos && tr.stages[k][j] >= 0;
          neg = neg && tr.stages[k][j] <= 0;
        }
        CHECK((pos || neg));
      }
      for (std::size_t j = 0; j < mu.size(); ++j) CHECK(abs(tr.stages[k][j]) <= abs(tr.stages[k - 1][j]));
      for (std::size_t tau = 0; tau < tr.sibling_sums[k - 1].size(); ++tau) {
        const std::size_t half = block / 2;
        Q s0 = 0, s1 = 0;
        for (std::size_t j = 0; j < half; ++j) {
          s0 += tr.stages[k - 1][tau * block + j];
          s1 += tr.stages[k - 1][tau * block + half + j];
        }
        CHECK(tr.sibling_sums[k - 1][tau].first == s0);
        CHECK(tr.sibling_sums[k - 1][tau].second == s1);
      }
    }
    for (std::size_t j = 0; j < mu.size(); ++j) {
      CHECK(out[j] >= 0);
      CHECK(out[j] <= max_of(mu[j], Q(0)));
    }
    CHECK_FALSE(compensation_defect(to_atomic(mu), to_atomic(out)).has_value());
  }
}

TEST_CASE("zero total mass gives zero output") {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const unsigned n = static_cast<unsigned>(rng.integer(0, 6));
    auto v = random_dyadic(rng, n, false).leaves();
    Q t = 0;
    for (const auto& x : v) t += x;
    v[0] -= t;
    CHECK(compensate_cantor(DyadicMeasure<Q>(n, v)) == DyadicMeasure<Q>(n));
  }
}

TEST_CASE("labels and atomic round trip") {
  CHECK(leaf_label(0, 0).empty());
  CHECK(leaf_label(2, 3) == "010");
  CHECK(leaf_labels(2) == PointSet{"00", "01", "10", "11"});
  const auto mu = dy(2, {"1", "2", "3", "4"});
  CHECK(from_atomic(to_atomic(mu)) == mu);
  const AtomicMeasure<Q> shuffled({"11", "00", "10", "01"}, {4, 1, 3, 2});
  CHECK(from_atomic(shuffled) == mu);
  CHECK_THROWS_AS(from_atomic(AtomicMeasure<Q>({"0", "10"}, {1, 1})), PreconditionError);
  CHECK_THROWS_AS(DyadicMeasure<Q>(2, std::vector<Q>{1, 2, 3}), PreconditionError);
  CHECK(cantor_procedure<Q>()(to_atomic(mu)) == to_atomic(compensate_cantor(mu)));
}

TEST_CASE("continuity probes") {
  const auto mu = dy(2, {"2/5", "-1/10", "-3/10", "1/5"});
  const auto none = continuity_probe(mu, DyadicMeasure<Q>(2), 10);
  CHECK(none.deviations.size() == 10);
  for (const auto& d : none.deviations) CHECK(d == 0);
  CHECK(none.converging());

  const auto r = continuity_probe(mu, dy(2, {"1", "-1", "1", "0"}), 20);
  CHECK(r.domination_ok);
  CHECK(r.tail_nonincreasing);
  CHECK(r.converging());
  CHECK(r.tail_deviations.size() == kContinuityTailProbes);

  // The linear window stays flat until k > 48; only the geometric tail shows the decay.
  const auto late = continuity_probe(dy(1, {"5/2", "1/16"}), dy(1, {"3", "-3"}), 48);
  CHECK(late.deviations.back() == Q(1, 16));
  CHECK(late.converging());

  // Sibling-sum-zero configuration: the perturbed subtree stays dominated.
  const auto zero_sub = continuity_probe(dy(2, {"1", "-1", "1", "1"}), dy(2, {"1", "0", "0", "0"}), 30);
  CHECK(zero_sub.domination_ok);
  CHECK(zero_sub.converging());

  CHECK_THROWS_AS(continuity_probe(dy(1, {"0", "0"}), dy(1, {"-1", "0"}), 3), PreconditionError);
  CHECK_THROWS_AS(continuity_probe(mu, DyadicMeasure<Q>(1), 3), PreconditionError);
}
