#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "eisenzero/qseries.hpp"
#include "eisenzero/real.hpp"

namespace eisenzero {

struct EvalOptions {
  double q_cap = 0.9;       // largest admissible |q_h|
  int growth_exponent = 2;  // tail envelope uses |c_n| (n+1)^g; pass 2k for weight-2k forms
};

struct SeriesValue {
  Complex value;
  Real tail_bound;
};

/// A q-series with coefficients rounded once to a working precision, for
/// repeated evaluation.
class PreparedSeries {
 public:
  PreparedSeries(const QSeries& f, Precision prec, EvalOptions options = {})
      : width_(f.width()), valuation_(f.valuation()), truncation_(f.truncation()), prec_(prec), options_(options),
        envelope_(prec) {
    if (prec < 53) throw Error(ErrorCode::PrecisionTooLow, "evaluation needs at least 53 bits");
    coeffs_.reserve(f.coefficients().size());
    for (const auto& c : f.coefficients()) coeffs_.emplace_back(c, prec);
    // Heuristic envelope over the last ten known exponents.
    int lo = std::max(valuation_, truncation_ - 10);
    for (int n = lo; n < truncation_; ++n) {
      Real c = abs(coeffs_[static_cast<std::size_t>(n - valuation_)]);
      Real w = pow(Real(static_cast<long>(std::max(n + 1, 1)), prec), options_.growth_exponent);
      envelope_ = max(envelope_, c * w);
    }
  }

  int width() const { return width_; }
  int valuation() const { return valuation_; }
  int truncation() const { return truncation_; }
  Precision precision() const { return prec_; }

  /// |q_h| at z.
  Real q_modulus(const Complex& z) const {
    return exp(-(Real::pi(prec_) * 2L) * z.im / static_cast<long>(width_));
  }

  Complex q_at(const Complex& z) const {
    Real scale = Real::pi(prec_) * 2L / static_cast<long>(width_);
    return exp(Complex(-(scale * z.im), scale * z.re));
  }

  SeriesValue evaluate(const Complex& z) const {
    Real qmod = q_modulus(z);
    if (qmod > Real(options_.q_cap, prec_))
      throw Error(ErrorCode::ImaginaryPartTooSmall,
                  "|q| = " + qmod.to_string(6) + " exceeds the cap " + std::to_string(options_.q_cap));
    Complex q = q_at(z);
    Complex acc(prec_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc *= q;
      acc.re += *it;
    }
    if (valuation_ != 0 && !coeffs_.empty()) acc *= pow(q, valuation_);
    Real one(1L, prec_);
    Real tail = envelope_ * pow(qmod, truncation_) / (one - qmod);
    return {std::move(acc), std::move(tail)};
  }

 private:
  int width_;
  int valuation_;
  int truncation_;
  Precision prec_;
  EvalOptions options_;
  std::vector<Real> coeffs_;
  Real envelope_;
};

/// Value of f at z together with a heuristic bound on the omitted tail
/// sum_{n>=T} c_n q^n; the authoritative accuracy check is agreement between
/// truncations T and 2T.
inline SeriesValue eval_series(const QSeries& f, const Complex& z, Precision prec, EvalOptions options = {}) {
  return PreparedSeries(f, prec, options).evaluate(z);
}

/// Double-precision evaluator for quadrature, where millions of points are
/// needed and 1e-13 relative accuracy suffices.
class DoubleSeries {
 public:
  explicit DoubleSeries(const QSeries& f) : width_(f.width()), valuation_(f.valuation()) {
    coeffs_.reserve(f.coefficients().size());
    for (const auto& c : f.coefficients()) coeffs_.push_back(c.get_d());
  }

  int width() const { return width_; }
  int valuation() const { return valuation_; }

  double q_modulus(std::complex<double> z) const { return std::exp(-2.0 * M_PI * z.imag() / width_); }

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> q = std::exp(std::complex<double>(0.0, 2.0 * M_PI / width_) * z);
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + *it;
    if (valuation_ != 0 && !coeffs_.empty()) acc *= std::pow(q, valuation_);
    return acc;
  }

 private:
  int width_;
  int valuation_;
  std::vector<double> coeffs_;
};

}  // namespace eisenzero
