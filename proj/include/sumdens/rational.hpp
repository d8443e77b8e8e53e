#pragma once

// Exact arithmetic vocabulary shared by every module: arbitrary-precision
// integers and reduced rationals, plus the textual "p/q" form used in files
// and on the command line.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sumdens {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

/// Always "p/q", including integers ("1/1") so the field shape never varies.
inline std::string to_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline Integer parse_unsigned_digits(std::string_view s) {
  Integer v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace detail

/// Parses a non-negative or negative integer written in decimal.
inline Integer parse_integer(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!detail::all_digits(s)) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  Integer v = detail::parse_unsigned_digits(s);
  return negative ? Integer(-v) : v;
}

/// Accepts "p/q", plain integers, and finite decimals ("0.3" is exactly 3/10).
/// Decimals never pass through binary floating point.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  auto bad = [&] { return std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) throw bad();
    Integer d = detail::parse_unsigned_digits(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(detail::parse_unsigned_digits(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw bad();
    if ((!whole.empty() && !detail::all_digits(whole)) || (!frac.empty() && !detail::all_digits(frac)))
      throw bad();
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    Integer w = whole.empty() ? Integer(0) : detail::parse_unsigned_digits(whole);
    Integer f = frac.empty() ? Integer(0) : detail::parse_unsigned_digits(frac);
    value = Rational(w * scale + f, scale);
  } else {
    if (!detail::all_digits(s)) throw bad();
    value = Rational(detail::parse_unsigned_digits(s));
  }
  return negative ? Rational(-value) : value;
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Checked narrowing; throws std::overflow_error when the value does not fit.
inline std::uint64_t to_u64(const Integer& v) {
  if (v < 0 || v > Integer(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
  return v.convert_to<std::uint64_t>();
}

inline bool fits_u64(const Integer& v) {
  return v >= 0 && v <= Integer(std::numeric_limits<std::uint64_t>::max());
}

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }
inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

/// Floor-mod into [0, m).
inline Integer mod_floor(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace sumdens
