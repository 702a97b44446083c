#pragma once

// Scalar layer shared by every module.
//
// Two scalar types are supported: exact rationals (the reference mode) and
// doubles compared under a process-wide tolerance. Algorithms never use the
// built-in comparison operators on scalars directly; they go through
// sign_of()/compare() so that the floating mode gets tolerant comparisons
// while the rational mode stays exact.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mcomp {

using Rational = mpq_class;

/// Parses "p/q", "p", or a finite decimal such as "-0.45" into a canonical
/// rational. Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" for integers) text form.
std::string format_rational(const Rational& value);

/// Nearest double (ties to even). mpq_get_d truncates, which would break
/// the %.17g text round trip.
double to_double(const Rational& value);

/// Tolerance used by every double comparison. Default 1e-9.
double float_tolerance();
void set_float_tolerance(double tol);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static int sign(const Rational& x) { return sgn(x); }
  static Rational from_rational(const Rational& r) { return r; }
  static std::string format(const Rational& x) { return format_rational(x); }
  static Rational parse(std::string_view text) { return parse_rational(text); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static int sign(double x) {
    const double tol = float_tolerance();
    return x > tol ? 1 : (x < -tol ? -1 : 0);
  }
  static double from_rational(const Rational& r) { return to_double(r); }
  static std::string format(double x);
  static double parse(std::string_view text) { return to_double(parse_rational(text)); }
};

template <class S>
int sign_of(const S& x) {
  return ScalarTraits<S>::sign(x);
}

template <class S>
int compare(const S& a, const S& b) {
  return sign_of<S>(S(a - b));
}

template <class S> bool is_zero(const S& x) { return sign_of<S>(x) == 0; }
template <class S> bool eq(const S& a, const S& b) { return compare(a, b) == 0; }
template <class S> bool lt(const S& a, const S& b) { return compare(a, b) < 0; }
template <class S> bool le(const S& a, const S& b) { return compare(a, b) <= 0; }
template <class S> bool gt(const S& a, const S& b) { return compare(a, b) > 0; }
template <class S> bool ge(const S& a, const S& b) { return compare(a, b) >= 0; }

template <class S>
S abs_of(const S& x) {
  return sign_of<S>(x) < 0 ? S(-x) : x;
}

template <class S>
S max_of(const S& a, const S& b) {
  return ge(a, b) ? a : b;
}

template <class S>
S min_of(const S& a, const S& b) {
  return le(a, b) ? a : b;
}

template <class S>
S clamp_unit(const S& x) {
  if (sign_of<S>(x) <= 0) return S(0);
  if (ge(x, S(1))) return S(1);
  return x;
}

template <class S>
S from_rational(const Rational& r) {
  return ScalarTraits<S>::from_rational(r);
}

template <class S>
std::string format_scalar(const S& x) {
  return ScalarTraits<S>::format(x);
}

template <class S>
S parse_scalar(std::string_view text) {
  return ScalarTraits<S>::parse(text);
}

}  // namespace mcomp
