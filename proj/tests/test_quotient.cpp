#include <doctest.h>

#include "mcomp/cantor.hpp"
#include "mcomp/quotient.hpp"
#include "mcomp/random.hpp"

using namespace mcomp;
using Q = Rational;

namespace {

QuotientSpec<Q> collapse() { return {{"a", "b"}, {"x"}, {0, 0}, {{{0, Q(1, 2)}, {1, Q(1, 2)}}}}; }

QuotientSpec<Q> random_spec(Rng& rng, std::size_t sources, std::size_t targets, const std::string& prefix) {
  QuotientSpec<Q> q;
  for (std::size_t t = 0; t < sources; ++t) q.source_points.push_back(prefix + std::to_string(t));
  for (std::size_t l = 0; l < targets; ++l) q.target_points.push_back(prefix + "L" + std::to_string(l));
  q.phi.resize(sources);
  for (std::size_t t = 0; t < sources; ++t) q.phi[t] = t < targets ? t : rng.index(targets);
  q.weights.resize(targets);
  std::vector<Q> raw(sources);
  std::vector<Q> fiber_sum(targets, Q(0));
  for (std::size_t t = 0; t < sources; ++t) {
    raw[t] = rng.integer(0, 3) == 0 ? Q(0) : rng.unit(9);
    if (t < targets && raw[t] == 0) raw[t] = 1;
    fiber_sum[q.phi[t]] += raw[t];
  }
  for (std::size_t t = 0; t < sources; ++t) {
    if (raw[t] != 0) q.weights[q.phi[t]][t] = raw[t] / fiber_sum[q.phi[t]];
  }
  return q;
}

AtomicMeasure<Q> random_measure(Rng& rng, const PointSet& pts) {
  std::vector<Q> w(pts.size());
  for (auto& x : w) x = rng.rational(10);
  return {pts, w};
}

}  // namespace

TEST_CASE("pushforward and adjoint") {
  const auto q = collapse();
  CHECK(validate_rao(q).ok());
  CHECK(pushforward(q, AtomicMeasure<Q>({"a", "b"}, {Q(1, 2), Q(-1, 4)})) == AtomicMeasure<Q>({"x"}, {Q(1, 4)}));
  CHECK(pushforward(q, AtomicMeasure<Q>({"a", "b"})) == AtomicMeasure<Q>({"x"}));
  CHECK(averaging_adjoint(q, AtomicMeasure<Q>({"x"}, {1})) == AtomicMeasure<Q>({"a", "b"}, {Q(1, 2), Q(1, 2)}));
  CHECK(averaging_adjoint(q, AtomicMeasure<Q>({"x"}, {-1})) == AtomicMeasure<Q>({"a", "b"}, {Q(-1, 2), Q(-1, 2)}));
  CHECK(averaging_adjoint(q, AtomicMeasure<Q>({"x"})) == AtomicMeasure<Q>({"a", "b"}));

  const QuotientSpec<Q> id{{"a", "b"}, {"a", "b"}, {0, 1}, {{{0, Q(1)}}, {{1, Q(1)}}}};
  const AtomicMeasure<Q> mu({"a", "b"}, {3, -2});
  CHECK(pushforward(id, mu) == mu);
  CHECK_THROWS_AS(pushforward(q, AtomicMeasure<Q>({"x"}, {1})), PreconditionError);

  CHECK(average(q, GridFunction<Q>({"a", "b"}, {1, 3})) == GridFunction<Q>({"x"}, {2}));
  CHECK(compose_with_phi(q, GridFunction<Q>({"x"}, {5})) == GridFunction<Q>({"a", "b"}, {5, 5}));
}

TEST_CASE("transfer") {
  const auto q = collapse();
  const CompensationProcedure<Q> single = [](const AtomicMeasure<Q>& m) { return compensate_single(m); };
  CHECK(transfer_compensation(q, single, AtomicMeasure<Q>({"x"}, {1})) == AtomicMeasure<Q>({"x"}, {1}));
  CHECK(transfer_compensation(q, single, AtomicMeasure<Q>({"x"}, {-1})) == AtomicMeasure<Q>({"x"}));
  CHECK(transferred_procedure(q, single)(AtomicMeasure<Q>({"x"}, {Q(2, 3)})) == AtomicMeasure<Q>({"x"}, {Q(2, 3)}));
}

TEST_CASE("violations") {
  auto q = collapse();
  q.weights[0][0] = Q(1, 4);
  q.weights[0][1] = Q(1, 4);
  auto rep = validate_rao(q);
  REQUIRE_FALSE(rep.ok());
  bool unit = false;
  for (const auto& v : rep.violations) unit = unit || v.find("unit sum") != std::string::npos;
  CHECK(unit);
  CHECK_THROWS_AS(require_valid(q), PreconditionError);

  QuotientSpec<Q> not_onto{{"a"}, {"x", "y"}, {0}, {{{0, Q(1)}}, {}}};
  rep = validate_rao(not_onto);
  bool onto = false;
  for (const auto& v : rep.violations) onto = onto || v.find("surjectivity") != std::string::npos;
  CHECK(onto);

  auto neg = collapse();
  neg.weights[0][0] = Q(3, 2);
  neg.weights[0][1] = Q(-1, 2);
  rep = validate_rao(neg);
  bool pos = false;
  for (const auto& v : rep.violations) pos = pos || v.find("positivity") != std::string::npos;
  CHECK(pos);
}

TEST_CASE("random transfers are compensations") {
  Rng rng(61);
  const CompensationProcedure<Q> single = [](const AtomicMeasure<Q>& m) { return compensate_single(m); };
  for (int i = 0; i < 200; ++i) {
    const std::size_t targets = static_cast<std::size_t>(rng.integer(1, 5));
    const std::size_t sources = targets + static_cast<std::size_t>(rng.integer(0, 6));
    const auto q = random_spec(rng, sources, targets, "s");
    REQUIRE(validate_rao(q).ok());
    const auto mu = random_measure(rng, q.target_points);
    CHECK(pushforward(q, averaging_adjoint(q, mu)) == mu);
    CHECK(total_mass(averaging_adjoint(q, mu)) == total_mass(mu));
    CHECK_FALSE(compensation_defect(mu, transfer_compensation(q, single, mu)).has_value());

    const auto g = GridFunction<Q>(q.target_points, random_measure(rng, q.target_points).values());
    CHECK(average(q, compose_with_phi(q, g)) == g);
  }
}

TEST_CASE("transfer composes") {
  Rng rng(62);
  const CompensationProcedure<Q> single = [](const AtomicMeasure<Q>& m) { return compensate_single(m); };
  for (int i = 0; i < 100; ++i) {
    const std::size_t l = static_cast<std::size_t>(rng.integer(1, 3));
    const std::size_t m = l + static_cast<std::size_t>(rng.integer(0, 3));
    const std::size_t k = m + static_cast<std::size_t>(rng.integer(0, 4));
    auto q1 = random_spec(rng, k, m, "k");
    const auto q2 = random_spec(rng, m, l, "m");
    q1.target_points = q2.source_points;
    const auto q = compose(q1, q2);
    CHECK(validate_rao(q).ok());
    const auto mu = random_measure(rng, q2.target_points);
    CHECK(transfer_compensation(q, single, mu) ==
          transfer_compensation(q2, transferred_procedure(q1, single), mu));
  }
  CHECK_THROWS_AS(compose(collapse(), collapse()), PreconditionError);
}

TEST_CASE("dyadic coarsening agrees with direct compensation") {
  Rng rng(63);
  const auto xi = cantor_procedure<Q>();
  for (int i = 0; i < 60; ++i) {
    const unsigned n = static_cast<unsigned>(rng.integer(1, 6));
    const unsigned m = static_cast<unsigned>(rng.integer(0, static_cast<long>(n)));
    const auto q = dyadic_coarsening<Q>(n, m);
    CHECK(validate_rao(q).ok());
    std::vector<Q> leaves(std::size_t{1} << m);
    for (auto& x : leaves) x = rng.rational(10);
    const DyadicMeasure<Q> mu(m, leaves);
    const auto via = transfer_compensation(q, xi, to_atomic(mu));
    CHECK(via == to_atomic(compensate_cantor(mu)));

    std::vector<Q> lw(std::size_t{1} << n);
    for (auto& x : lw) x = rng.open_unit(9);
    const auto qw = dyadic_coarsening<Q>(n, m, lw);
    CHECK(validate_rao(qw).ok());
    CHECK(pushforward(qw, averaging_adjoint(qw, to_atomic(mu))) == to_atomic(mu));
  }
  CHECK_THROWS_AS(dyadic_coarsening<Q>(2, 3), PreconditionError);
  CHECK_THROWS_AS(dyadic_coarsening<Q>(1, 0, std::vector<Q>{0, 0}), PreconditionError);
}
