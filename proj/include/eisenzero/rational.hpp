#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "eisenzero/error.hpp"

namespace eisenzero {

// GMP rationals are kept canonical (lowest terms, positive denominator) by
// every gmpxx arithmetic operator; make_rational canonicalizes explicitly.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw Error(ErrorCode::InvalidArgument, "empty rational");
  s = s.substr(first, last - first + 1);
  if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "malformed rational '" + s + "'");
  if (s.front() == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0)
    throw Error(ErrorCode::InvalidArgument, "malformed rational '" + s + "'");
  r.canonicalize();
  return r;
}

inline Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline Rational rpow(const Rational& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw Error(ErrorCode::InvalidArgument, "0 to a negative power");
    Rational inv = 1 / base;
    return rpow(inv, -exp);
  }
  Rational out(ipow(base.get_num(), static_cast<unsigned long>(exp)),
               ipow(base.get_den(), static_cast<unsigned long>(exp)));
  out.canonicalize();
  return out;
}

inline int sign(const Rational& r) { return sgn(r); }

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace eisenzero
