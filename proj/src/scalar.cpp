#include "mcomp/scalar.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

#include "mcomp/errors.hpp"

namespace mcomp {

namespace {

std::atomic<double> g_tolerance{1e-9};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  mpz_class value(std::string(digits), 10);
  return negative ? mpz_class(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw ParseError("malformed denominator in '" + std::string(text) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    Rational mantissa = parse_rational(text.substr(0, e));
    std::string_view exp_text = text.substr(e + 1);
    const mpz_class exponent = parse_integer(exp_text, text);
    if (abs(exponent) > 4096) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    const long k = exponent.get_si();
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    Rational r = k < 0 ? Rational(mantissa / Rational(scale)) : Rational(mantissa * Rational(scale));
    r.canonicalize();
    return r;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    mpz_class int_part = parse_integer(text.substr(0, dot), text);
    std::string_view frac = text.substr(dot + 1);
    if (!all_digits(frac)) throw ParseError("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class frac_value(std::string(frac), 10);
    bool negative = !text.empty() && text.front() == '-';
    mpz_class magnitude = (negative ? mpz_class(-int_part) : int_part) * scale + frac_value;
    Rational r(negative ? mpz_class(-magnitude) : magnitude, scale);
    r.canonicalize();
    return r;
  }

  return Rational(parse_integer(text, text));
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double float_tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_float_tolerance(double tol) {
  if (!(tol >= 0.0)) throw PreconditionError("tolerance must be non-negative");
  g_tolerance.store(tol, std::memory_order_relaxed);
}

std::string ScalarTraits<double>::format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const Rational& value) {
  const double t = value.get_d();
  if (!std::isfinite(t) || Rational(t) == value) return t;
  const double away = std::nextafter(t, sgn(value) > 0 ? std::numeric_limits<double>::infinity()
                                                       : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) return t;
  const Rational dt = abs(value - Rational(t));
  const Rational da = abs(value - Rational(away));
  if (dt != da) return dt < da ? t : away;
  std::int64_t bits = 0;
  std::memcpy(&bits, &t, sizeof bits);
  return (bits & 1) == 0 ? t : away;
}

}  // namespace mcomp
