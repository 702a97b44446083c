#include <doctest.h>

#include "mcomp/errors.hpp"
#include "mcomp/random.hpp"
#include "mcomp/scalar.hpp"

using namespace mcomp;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(parse_rational(" 7/21 ") == Rational(1, 3));
  CHECK(parse_rational("-0.45") == Rational(-9, 20));
  CHECK(parse_rational("0.45") == Rational(9, 20));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK(parse_rational("-3/10").get_den() == 10);

  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
}

TEST_CASE("rational formatting is canonical") {
  CHECK(format_rational(parse_rational("2/4")) == "1/2");
  CHECK(format_rational(parse_rational("-6/3")) == "-2");
  CHECK(format_rational(Rational(0)) == "0");
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Rational r = rng.rational(1000);
    CHECK(parse_rational(format_rational(r)) == r);
  }
}

TEST_CASE("double comparisons use the tolerance") {
  set_float_tolerance(1e-9);
  CHECK(eq(0.1 + 0.2, 0.3));
  CHECK(sign_of(1e-12) == 0);
  CHECK(lt(1.0, 1.0 + 1e-6));
  set_float_tolerance(0.0);
  CHECK_FALSE(eq(0.1 + 0.2, 0.3));
  set_float_tolerance(1e-9);
  CHECK_THROWS_AS(set_float_tolerance(-1.0), PreconditionError);
  CHECK(parse_scalar<double>(format_scalar(0.1)) == 0.1);
}

TEST_CASE("conversion to double rounds to nearest") {
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(-1, 3)) == -1.0 / 3.0);
  CHECK(to_double(Rational(2, 3)) == 2.0 / 3.0);
  CHECK(to_double(Rational(1, 10)) == 0.1);
  CHECK(to_double(Rational(0)) == 0.0);
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const double x = static_cast<double>(rng.integer(-1000000, 1000000)) / static_cast<double>(rng.integer(1, 9999));
    CHECK(parse_scalar<double>(format_scalar(x)) == x);
  }
}

TEST_CASE("clamp and min/max") {
  CHECK(clamp_unit(Rational(3, 2)) == 1);
  CHECK(clamp_unit(Rational(-1, 2)) == 0);
  CHECK(clamp_unit(Rational(1, 3)) == Rational(1, 3));
  CHECK(max_of(Rational(1), Rational(2)) == 2);
  CHECK(min_of(Rational(1), Rational(2)) == 1);
  CHECK(abs_of(Rational(-2, 3)) == Rational(2, 3));
}

TEST_CASE("rng streams are deterministic") {
  Rng a(mix_seed(42, 3));
  Rng b(mix_seed(42, 3));
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(mix_seed(42, 3) != mix_seed(42, 4));
  Rng c(1);
  for (int i = 0; i < 200; ++i) {
    const Rational u = c.unit(50);
    CHECK(u >= 0);
    CHECK(u <= 1);
    const Rational o = c.open_unit(50);
    CHECK(o > 0);
    CHECK(o < 1);
    const long k = c.integer(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
  const auto v = c.signed_vector_with_norm(7, Rational(1, 3), 100);
  Rational s = 0;
  for (const auto& x : v) s += abs(x);
  CHECK(s == Rational(1, 3));
}
