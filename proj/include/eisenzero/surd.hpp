#pragma once

#include <string>

#include "eisenzero/rational.hpp"
#include "eisenzero/real.hpp"

namespace eisenzero {

/// a + b sqrt(d) with rational a, b and a squarefree-or-not positive radicand d.
/// Values with b = 0 are rational and compare equal regardless of d.
struct QuadraticSurd {
  Rational a;
  Rational b;
  long d = 1;

  QuadraticSurd() = default;
  QuadraticSurd(Rational a_, Rational b_ = 0, long d_ = 1) : a(std::move(a_)), b(std::move(b_)), d(d_) {
    if (d <= 0) throw Error(ErrorCode::InvalidArgument, "surd radicand must be positive");
    if (b == 0) d = 1;
  }

  bool is_rational() const { return b == 0; }

  Real to_real(Precision prec) const {
    Real out(a, prec);
    if (b != 0) out += Real(b, prec) * sqrt(Real(d, prec));
    return out;
  }
  double to_double() const { return to_real(64).to_double(); }

  /// Sign decided exactly: compares a^2 against b^2 d when the parts disagree.
  int sign() const {
    int sa = sgn(a), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
    Rational lhs = a * a, rhs = b * b * d;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
  }

  std::string str() const {
    if (b == 0) return a.get_str();
    std::string out = a == 0 ? "" : a.get_str() + (b > 0 ? "+" : "");
    return out + b.get_str() + "*sqrt(" + std::to_string(d) + ")";
  }
};

namespace detail {

inline long common_radicand(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (x.b != 0 && y.b != 0 && x.d != y.d)
    throw Error(ErrorCode::InvalidArgument, "surds with different radicands");
  return x.b != 0 ? x.d : y.d;
}

}  // namespace detail

inline QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
  return QuadraticSurd(x.a + y.a, x.b + y.b, detail::common_radicand(x, y));
}
inline QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
  return QuadraticSurd(x.a - y.a, x.b - y.b, detail::common_radicand(x, y));
}
inline QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
  long d = detail::common_radicand(x, y);
  return QuadraticSurd(x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d);
}
inline bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) { return (x - y).sign() == 0; }

}  // namespace eisenzero
