#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>

#include "eisenzero/rational.hpp"

namespace eisenzero {

/// Binary precision of a multiprecision value, in bits.
using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;

/// RAII wrapper over an MPFR float. Every value carries its own precision;
/// binary operations round to the larger of the two operand precisions, so
/// there is no global precision state to share between threads.
class Real {
 public:
  explicit Real(Precision prec = kDefaultPrecision) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(long value, Precision prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(int value, Precision prec) : Real(static_cast<long>(value), prec) {}
  Real(double value, Precision prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, value, MPFR_RNDN); }
  Real(const Rational& value, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Integer& value, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_string(const std::string& text, Precision prec) {
    Real out(prec);
    if (mpfr_set_str(out.v_, text.c_str(), 10, MPFR_RNDN) != 0)
      throw Error(ErrorCode::InvalidArgument, "malformed real '" + text + "'");
    return out;
  }

  static Real pi(Precision prec) {
    Real out(prec);
    mpfr_const_pi(out.v_, MPFR_RNDN);
    return out;
  }

  Precision precision() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact rational value of the stored binary float.
  Rational to_rational() const {
    Rational out;
    mpfr_get_q(out.get_mpq_t(), v_);
    return out;
  }

  /// Scientific decimal rendering with the given number of significant digits.
  std::string to_string(int digits = 40) const {
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Re", std::max(digits - 1, 0), v_);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real& operator+=(const Real& o) { return apply(o, mpfr_add); }
  Real& operator-=(const Real& o) { return apply(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return apply(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return apply(o, mpfr_div); }

  Real operator-() const {
    Real out(*this);
    mpfr_neg(out.v_, out.v_, MPFR_RNDN);
    return out;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend Real operator*(Real a, long b) {
    mpfr_mul_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }
  friend Real operator*(long b, Real a) { return std::move(a) * b; }
  friend Real operator/(Real a, long b) {
    mpfr_div_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }
  friend Real operator+(Real a, long b) {
    mpfr_add_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }
  friend Real operator-(Real a, long b) {
    mpfr_sub_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend Real abs(Real a) {
    mpfr_abs(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real sqrt(Real a) {
    mpfr_sqrt(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real exp(Real a) {
    mpfr_exp(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real log(Real a) {
    mpfr_log(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real sin(Real a) {
    mpfr_sin(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real cos(Real a) {
    mpfr_cos(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real atan2(const Real& y, const Real& x) {
    Real out(std::max(y.precision(), x.precision()));
    mpfr_atan2(out.v_, y.v_, x.v_, MPFR_RNDN);
    return out;
  }
  friend Real pow(Real a, long n) {
    mpfr_pow_si(a.v_, a.v_, n, MPFR_RNDN);
    return a;
  }
  friend Real ldexp(Real a, long e) {
    mpfr_mul_2si(a.v_, a.v_, e, MPFR_RNDN);
    return a;
  }
  friend Real max(const Real& a, const Real& b) { return a < b ? b : a; }
  friend Real min(const Real& a, const Real& b) { return b < a ? b : a; }

 private:
  template <class Op>
  Real& apply(const Real& o, Op op) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

/// Complex number over Real; only the operations the library needs.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision prec = kDefaultPrecision) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Precision precision() const { return std::max(re.precision(), im.precision()); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real den = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }

  Complex operator-() const { return Complex(-re, -im); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const Real& s) { return a *= s; }
  friend Complex operator*(const Real& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }

  friend Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
  friend Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
  friend Real abs(const Complex& z) {
    Real out(z.precision());
    mpfr_hypot(out.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return out;
  }
};

/// e^{i theta}
inline Complex expi(const Real& theta) {
  Real s(theta.precision()), c(theta.precision());
  mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
  return Complex(std::move(c), std::move(s));
}

/// e^{z}
inline Complex exp(const Complex& z) { return expi(z.im) * exp(z.re); }

inline Complex pow(const Complex& z, long n) {
  Complex base = z;
  Complex out(Real(1L, z.precision()), Real(z.precision()));
  bool invert = n < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (e) {
    if (e & 1UL) out *= base;
    e >>= 1;
    if (e) base *= base;
  }
  if (invert) {
    Complex one(Real(1L, z.precision()), Real(z.precision()));
    return one / out;
  }
  return out;
}

}  // namespace eisenzero
