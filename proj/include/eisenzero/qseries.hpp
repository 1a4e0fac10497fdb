#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eisenzero/error.hpp"
#include "eisenzero/rational.hpp"

namespace eisenzero {

/// Truncated Laurent series  sum_{n=v}^{T-1} c_n q_h^n + O(q_h^T)  with exact
/// rational coefficients, where q_h = exp(2 pi i z / h).
///
/// Storage is dense from the valuation up to the truncation. A series whose
/// known coefficients all vanish is the zero series O(q_h^T); it reports
/// valuation() == truncation().
class QSeries {
 public:
  /// `coeffs[i]` is the coefficient of q^(start + i); the known range ends at
  /// `truncation`, so coeffs.size() must equal truncation - start. Leading
  /// zeros are stripped.
  QSeries(int width, int start, std::vector<Rational> coeffs, int truncation)
      : width_(width), valuation_(start), truncation_(truncation), coeffs_(std::move(coeffs)) {
    if (width <= 0) throw Error(ErrorCode::InvalidArgument, "cusp width must be positive");
    if (static_cast<long>(coeffs_.size()) != static_cast<long>(truncation) - start)
      throw Error(ErrorCode::InvalidArgument, "coefficient count does not match truncation");
    normalize();
  }

  static QSeries zero(int width, int truncation) { return QSeries(width, truncation, {}, truncation); }

  static QSeries constant(const Rational& c, int width, int truncation) {
    if (truncation <= 0) return zero(width, truncation);
    std::vector<Rational> v(static_cast<std::size_t>(truncation));
    v[0] = c;
    return QSeries(width, 0, std::move(v), truncation);
  }

  static QSeries monomial(const Rational& c, int exponent, int width, int truncation) {
    if (truncation <= exponent) return zero(width, truncation);
    std::vector<Rational> v(static_cast<std::size_t>(truncation - exponent));
    v[0] = c;
    return QSeries(width, exponent, std::move(v), truncation);
  }

  int width() const { return width_; }
  int valuation() const { return valuation_; }
  int truncation() const { return truncation_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Coefficients for exponents valuation()..truncation()-1.
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  const Rational& leading() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "zero series has no leading term");
    return coeffs_.front();
  }

  /// Coefficient of q^n. Exponents at or past the truncation are unknown.
  Rational coeff(int n) const {
    if (n >= truncation_)
      throw Error(ErrorCode::TruncationExceeded,
                  "coefficient q^" + std::to_string(n) + " is beyond O(q^" + std::to_string(truncation_) + ")");
    if (n < valuation_) return Rational(0);
    return coeffs_[static_cast<std::size_t>(n - valuation_)];
  }

  QSeries truncated(int truncation) const {
    if (truncation > truncation_)
      throw Error(ErrorCode::TruncationExceeded, "cannot extend a truncated series");
    if (truncation <= valuation_) return zero(width_, truncation);
    std::vector<Rational> v(coeffs_.begin(), coeffs_.begin() + (truncation - valuation_));
    return QSeries(width_, valuation_, std::move(v), truncation);
  }

  /// Same coefficients read in a variable of a different cusp width.
  QSeries with_width(int width) const { return QSeries(width, valuation_, coeffs_, truncation_); }

  QSeries operator-() const {
    std::vector<Rational> v(coeffs_);
    for (auto& c : v) c = -c;
    return QSeries(width_, valuation_, std::move(v), truncation_);
  }

  QSeries& operator*=(const Rational& s) {
    if (s == 0) {
      *this = zero(width_, truncation_);
      return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  /// Adds s to the constant term (when it is inside the known range).
  QSeries add_constant(const Rational& s) const {
    if (truncation_ <= 0 || s == 0) return *this;
    int start = std::min(valuation_, 0);
    std::vector<Rational> v(static_cast<std::size_t>(truncation_ - start));
    for (int n = valuation_; n < truncation_; ++n) v[static_cast<std::size_t>(n - start)] = coeff(n);
    v[static_cast<std::size_t>(-start)] += s;
    return QSeries(width_, start, std::move(v), truncation_);
  }

  friend bool operator==(const QSeries& a, const QSeries& b) {
    return a.width_ == b.width_ && a.valuation_ == b.valuation_ && a.truncation_ == b.truncation_ &&
           a.coeffs_ == b.coeffs_;
  }

 private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      valuation_ = truncation_;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      valuation_ += static_cast<int>(lead);
    }
  }

  int width_;
  int valuation_;
  int truncation_;
  std::vector<Rational> coeffs_;
};

namespace detail {

inline void require_same_width(const QSeries& f, const QSeries& g) {
  if (f.width() != g.width())
    throw Error(ErrorCode::WidthMismatch,
                "widths " + std::to_string(f.width()) + " and " + std::to_string(g.width()));
}

inline QSeries add_impl(const QSeries& f, const QSeries& g, bool subtract) {
  require_same_width(f, g);
  int trunc = std::min(f.truncation(), g.truncation());
  int start = std::min(f.valuation(), g.valuation());
  if (start >= trunc) return QSeries::zero(f.width(), trunc);
  std::vector<Rational> v(static_cast<std::size_t>(trunc - start));
  for (int n = start; n < trunc; ++n) {
    auto& slot = v[static_cast<std::size_t>(n - start)];
    if (n >= f.valuation()) slot = f.coeff(n);
    if (n >= g.valuation()) {
      if (subtract)
        slot -= g.coeff(n);
      else
        slot += g.coeff(n);
    }
  }
  return QSeries(f.width(), start, std::move(v), trunc);
}

}  // namespace detail

inline QSeries operator+(const QSeries& f, const QSeries& g) { return detail::add_impl(f, g, false); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return detail::add_impl(f, g, true); }

inline QSeries operator*(QSeries f, const Rational& s) { return f *= s; }
inline QSeries operator*(const Rational& s, QSeries f) { return f *= s; }

inline QSeries operator*(const QSeries& f, const QSeries& g) {
  detail::require_same_width(f, g);
  int trunc = std::min(f.truncation() + g.valuation(), g.truncation() + f.valuation());
  int val = f.valuation() + g.valuation();
  if (f.is_zero() || g.is_zero()) return QSeries::zero(f.width(), trunc);
  if (trunc <= val)
    throw Error(ErrorCode::EmptyTruncation, "product has no known coefficients");
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  std::size_t len = static_cast<std::size_t>(trunc - val);
  std::vector<Rational> c(len);
  for (std::size_t i = 0; i < len && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    std::size_t jmax = std::min(len - i, b.size());
    for (std::size_t j = 0; j < jmax; ++j) c[i + j] += a[i] * b[j];
  }
  return QSeries(f.width(), val, std::move(c), trunc);
}

/// 1/g, valid to O(q^(T_g - 2 v_g)).
inline QSeries inverse(const QSeries& g) {
  if (g.is_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "inverse of the zero series");
  const auto& a = g.coefficients();
  std::size_t len = a.size();
  int val = -g.valuation();
  int trunc = g.truncation() - 2 * g.valuation();
  std::vector<Rational> b(len);
  Rational inv0 = 1 / a[0];
  b[0] = inv0;
  for (std::size_t n = 1; n < len; ++n) {
    Rational acc;
    for (std::size_t i = 1; i <= n; ++i)
      if (a[i] != 0) acc += a[i] * b[n - i];
    b[n] = -acc * inv0;
  }
  return QSeries(g.width(), val, std::move(b), trunc);
}

inline QSeries operator/(const QSeries& f, const QSeries& g) {
  detail::require_same_width(f, g);
  if (g.is_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "division by the zero series");
  return f * inverse(g);
}

inline QSeries pow(const QSeries& f, long m) {
  if (m < 0) {
    if (f.is_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "negative power of the zero series");
    return pow(inverse(f), -m);
  }
  if (m == 0) {
    int rel = f.truncation() - f.valuation();
    return QSeries::constant(Rational(1), f.width(), std::max(rel, 1));
  }
  QSeries base = f;
  std::optional<QSeries> out;
  while (m > 0) {
    if (m & 1) out = out ? (*out * base) : base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  return *out;
}

/// q d/dq: the coefficient at q^n becomes n c_n.
inline QSeries q_derivative(const QSeries& f) {
  std::vector<Rational> v(f.coefficients());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= f.valuation() + static_cast<int>(i);
  return QSeries(f.width(), f.valuation(), std::move(v), f.truncation());
}

/// f(q) -> f(q^N), i.e. z -> N z for a width-1 expansion.
inline QSeries rescale(const QSeries& f, int n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "rescale factor must be positive");
  if (f.is_zero()) return QSeries::zero(f.width(), f.truncation() * n);
  int val = f.valuation() * n;
  int trunc = f.truncation() * n;
  std::vector<Rational> v(static_cast<std::size_t>(trunc - val));
  const auto& c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) v[i * static_cast<std::size_t>(n)] = c[i];
  return QSeries(f.width(), val, std::move(v), trunc);
}

inline std::string to_string(const QSeries& f, int max_terms = 8) {
  std::ostringstream os;
  int shown = 0;
  for (int n = f.valuation(); n < f.truncation() && shown < max_terms; ++n) {
    Rational c = f.coeff(n);
    if (c == 0) continue;
    if (shown > 0) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational a = abs(c);
    bool unit = (a == 1 && n != 0);
    if (!unit) os << a.get_str();
    if (n != 0) {
      os << (unit ? "" : "*") << "q";
      if (n != 1) os << "^" << n;
    }
    ++shown;
  }
  if (shown == 0) os << "0";
  os << " + O(q^" << f.truncation() << ")";
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const QSeries& f) { return os << to_string(f); }

}  // namespace eisenzero
