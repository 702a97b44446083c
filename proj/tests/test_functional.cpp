#include <doctest.h>

#include "mcomp/bpb_functional.hpp"
#include "mcomp/random.hpp"

using namespace mcomp;
using Q = Rational;

namespace {

const PointSet kAB{"a", "b"};
const PointSet kABC{"a", "b", "c"};

GridFunction<Q> fn(const PointSet& p, std::vector<Q> v) { return {p, std::move(v)}; }
AtomicMeasure<Q> measure(const PointSet& p, std::vector<Q> v) { return {p, std::move(v)}; }

}  // namespace

TEST_CASE("bump functions") {
  const Q sigma(1, 2), eps(3, 5);
  const PointSet one{"t"};
  CHECK(bump_u(fn(one, {1}), sigma, eps)[0] == 1);
  CHECK(bump_u(fn(one, {0}), sigma, eps)[0] == 0);
  CHECK(bump_u(fn(one, {Q(9, 20)}), sigma, eps)[0] == Q(1, 2));
  CHECK(bump_v(fn(one, {-1}), sigma, eps)[0] == 1);
  CHECK(bump_v(fn(one, {0}), sigma, eps)[0] == 0);
  CHECK(bump_v(fn(one, {Q(-9, 20)}), sigma, eps)[0] == Q(1, 2));
  CHECK_THROWS_AS(bump_u(fn(one, {0}), eps, sigma), PreconditionError);
  CHECK_THROWS_AS(bump_u(fn(one, {0}), Q(0), eps), PreconditionError);
}

TEST_CASE("split example and inequalities") {
  const auto f = fn(kABC, {1, 0, -1});
  const auto mu = measure(kABC, {Q(1, 2), Q(1, 10), Q(-2, 5)});
  const auto sp = split_measure(mu, f, Q(1, 2), Q(3, 5));
  CHECK(sp.mu1 == measure(kABC, {Q(1, 2), 0, 0}));
  CHECK(sp.mu2 == measure(kABC, {0, 0, Q(-2, 5)}));

  const auto rep = basiclemma_check(f, mu, Q(1, 2), Q(3, 5));
  CHECK(rep.pairing_value == Q(9, 10));
  CHECK(rep.bound == Q(1, 5));
  // ‖μ₁‖ ≤ 1 and ‖μ₂‖ ≤ 1 are reported separately.
  REQUIRE(rep.checks.size() == 5);
  CHECK(rep.all_hold());
  CHECK(rep.checks[2].lhs == "9/10");
  CHECK(rep.checks[2].rhs == "4/5");
  CHECK(rep.checks[3].lhs == "0");
  CHECK(rep.checks[4].lhs == "1/10");
  CHECK(rep.checks[4].rhs == "1/5");

  const auto zero = split_measure(AtomicMeasure<Q>(kABC), f, Q(1, 2), Q(3, 5));
  CHECK(zero.mu1 == AtomicMeasure<Q>(kABC));
  CHECK(zero.mu2 == AtomicMeasure<Q>(kABC));
  const auto flat = split_measure(mu, GridFunction<Q>(kABC), Q(1, 2), Q(3, 5));
  CHECK(flat.mu1 == AtomicMeasure<Q>(kABC));
  CHECK(flat.mu2 == AtomicMeasure<Q>(kABC));

  const auto att = basiclemma_check(fn(kAB, {1, -1}), measure(kAB, {Q(1, 2), Q(-1, 2)}), Q(1, 4), Q(1, 2));
  CHECK(att.bound == 0);
  CHECK(att.all_hold());

  CHECK_THROWS_AS(basiclemma_check(fn(kAB, {2, 0}), measure(kAB, {1, 0}), Q(1, 4), Q(1, 2)), PreconditionError);
  CHECK_THROWS_AS(split_measure(mu, f, Q(1, 2), Q(1)), PreconditionError);
}

TEST_CASE("random inequalities") {
  Rng rng(101);
  for (int i = 0; i < 400; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 12));
    PointSet pts;
    for (std::size_t j = 0; j < n; ++j) pts.push_back("p" + std::to_string(j));
    std::vector<Q> fv(n);
    for (auto& x : fv) x = rng.unit(20) * 2 - 1;
    const auto mv = rng.signed_vector_with_norm(n, rng.unit(20), 20);
    const Q eps = rng.open_unit(20);
    const Q sigma = eps * rng.open_unit(20);
    CHECK(basiclemma_check(fn(pts, fv), measure(pts, mv), sigma, eps).all_hold());
  }
}

TEST_CASE("rounding") {
  CHECK(round_function(fn(kAB, {1, 0}), Q(1, 2), Q(3, 4)) == fn(kAB, {1, 0}));
  // 0.3 lies in the band (1/4, 1/2): ramp gives 0.3 + (1/2)(0.05)/(1/4).
  CHECK(round_function(fn(kAB, {1, Q(3, 10)}), Q(1, 2), Q(3, 4)) == fn(kAB, {1, Q(2, 5)}));
  CHECK(round_function(fn(kAB, {1, Q(-1, 2)}), Q(1, 2), Q(3, 4)) == fn(kAB, {1, -1}));
  CHECK(round_function(fn(kAB, {1, Q(1, 4)}), Q(1, 2), Q(3, 4)) == fn(kAB, {1, Q(1, 4)}));
  CHECK_THROWS_AS(round_function(fn(kAB, {1, 0}), Q(3, 4), Q(1, 2)), PreconditionError);
  // 1 − ‖f‖ must be below ε.
  CHECK_THROWS_AS(round_function(fn(kAB, {Q(1, 4), 0}), Q(1, 2), Q(3, 4)), PreconditionError);
  CHECK(default_rounding_delta(Q(1, 2)) == Q(3, 4));
}

TEST_CASE("rounding keeps every attaining measure attaining") {
  Rng rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
    PointSet pts;
    std::vector<Q> fv(n);
    for (std::size_t j = 0; j < n; ++j) {
      pts.push_back("p" + std::to_string(j));
      const long kind = rng.integer(0, 2);
      fv[j] = kind == 0 ? Q(1) : kind == 1 ? Q(-1) : rng.unit(10) * 2 - 1;
    }
    fv[0] = 1;
    const Q eps = rng.open_unit(10);
    const Q delta = eps + (1 - eps) * rng.open_unit(10);
    const auto f = fn(pts, fv);
    const auto f0 = round_function(f, eps, delta);
    CHECK(sup_norm(f0) == 1);
    CHECK(sup_norm(f - f0) <= eps);

    std::size_t combos = 1;
    for (std::size_t j = 0; j < n; ++j) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<Q> w(n);
      Q norm = 0;
      for (std::size_t j = 0, x = c; j < n; ++j, x /= 3) {
        w[j] = Q(static_cast<long>(x % 3) - 1);
        norm += abs(w[j]);
      }
      if (norm == 0) continue;
      for (auto& x : w) x /= norm;
      const auto nu = measure(pts, w);
      if (pairing(nu, f) == 1) CHECK(pairing(nu, f0) == 1);
    }
  }
}

TEST_CASE("projection") {
  const PointSet one{"t"};
  const auto delta_t = measure(one, {1});
  const auto p = project_family(fn(one, {1}), fn(one, {1}), {delta_t}, Q(1, 3));
  REQUIRE(p.size() == 1);
  CHECK(p[0] == delta_t);

  const auto attaining = measure(kAB, {Q(1, 2), Q(-1, 2)});
  const auto pm = fn(kAB, {1, -1});
  CHECK(project_family(pm, pm, {attaining}, Q(1, 2))[0] == attaining);

  // σ = 1/2 at ε = 3/5; the second atom sits below the bump and is dropped.
  const auto f = fn(kAB, {1, 0});
  const auto near = measure(kAB, {Q(19, 20), Q(1, 20)});
  const auto q = project_family(f, round_function(f, Q(3, 5), Q(4, 5)), {near}, Q(3, 5));
  CHECK(q[0] == measure(kAB, {1, 0}));

  CHECK_THROWS_AS(project_family(f, f, {measure(kAB, {Q(1, 2), Q(1, 2)})}, Q(1, 2)), PreconditionError);
  CHECK_THROWS_AS(project_family(f, f, {measure(kAB, {2, 0})}, Q(1, 2)), PreconditionError);
}

TEST_CASE("functional repair") {
  auto r = bpb_repair_functional(fn(kAB, {1, 0}), measure(kAB, {1, 0}), Q(1, 2));
  CHECK(r.f0 == fn(kAB, {1, 0}));
  CHECK(r.mu0 == measure(kAB, {1, 0}));
  CHECK(r.function_distance == 0);
  CHECK(r.measure_distance == 0);
  CHECK(r.certified(Q(1, 2)));

  r = bpb_repair_functional(fn(kAB, {1, 1}), measure(kAB, {Q(1, 2), Q(1, 2)}), Q(1, 2));
  CHECK(r.f0 == fn(kAB, {1, 1}));
  CHECK(r.pairing_value == 1);
  CHECK(r.measure_distance <= Q(1, 2));

  r = bpb_repair_functional(fn(kAB, {1, 0}), measure(kAB, {Q(19, 20), Q(1, 20)}), Q(3, 5));
  CHECK(r.mu0 == measure(kAB, {1, 0}));
  CHECK(r.measure_distance == Q(1, 10));

  r = bpb_repair_functional(fn(kAB, {1, 0}), measure(kAB, {Q(19, 20), Q(1, 20)}), Q(3, 5), Q(7, 10));
  CHECK(r.certified(Q(3, 5)));

  CHECK_THROWS_AS(bpb_repair_functional(fn(kAB, {1, 0}), measure(kAB, {Q(1, 2), 0}), Q(1, 2)), PreconditionError);
  CHECK_THROWS_AS(bpb_repair_functional(fn(kAB, {1, 0}), measure(kAB, {1, 0}), Q(1)), PreconditionError);
}

TEST_CASE("boundary instances repair with exact certificates") {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
    PointSet pts;
    for (std::size_t j = 0; j < n; ++j) pts.push_back("p" + std::to_string(j));
    const Q eps = rng.open_unit(12);
    // f = 1 on p0, 1 − ε on p1; mass ε/6 on p1 puts μ(f) exactly on the gate.
    std::vector<Q> fv(n, Q(0));
    fv[0] = 1;
    fv[1] = 1 - eps;
    const Q gap = functional_gate(eps);
    std::vector<Q> mv(n, Q(0));
    mv[1] = gap / eps;
    mv[0] = 1 - mv[1];
    const auto f = fn(pts, fv);
    const auto mu = measure(pts, mv);
    REQUIRE(pairing(mu, f) == 1 - gap);
    const auto r = bpb_repair_functional(f, mu, eps);
    CHECK(r.certified(eps));
    for (std::size_t j = 0; j < n; ++j) {
      if (mu[j] == 0) CHECK(r.mu0[j] == 0);
    }
    CHECK(is_hahn_partition(hahn(mu), r.mu0));
  }
}
