#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "eisenzero/rational.hpp"
#include "eisenzero/real.hpp"

namespace eisenzero {

/// Dense univariate polynomial over Q, coefficients from the constant term up.
/// The zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Rational& a) { return Polynomial({a}); }
  static Polynomial x_minus(const Rational& r) { return Polynomial({-r, Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(int i) const { return i >= 0 && i <= degree() ? c_[static_cast<std::size_t>(i)] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  int sign_at(const Rational& x) const { return sgn((*this)(x)); }
  /// Sign as x -> +infinity (dir > 0) or -infinity (dir < 0).
  int sign_at_infinity(int dir) const {
    if (is_zero()) return 0;
    int s = sgn(leading());
    return (dir < 0 && degree() % 2 == 1) ? -s : s;
  }

  Real operator()(const Real& x) const {
    Real acc(x.precision());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Real(*it, x.precision());
    return acc;
  }
  Complex operator()(const Complex& z) const {
    Precision prec = z.precision();
    Complex acc(prec);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= z;
      acc.re += Real(*it, prec);
    }
    return acc;
  }

  Polynomial derivative() const {
    std::vector<Rational> d;
    for (int i = 1; i <= degree(); ++i) d.push_back(c_[static_cast<std::size_t>(i)] * i);
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    Polynomial out(*this);
    Rational lc = leading();
    for (auto& a : out.c_) a /= lc;
    return out;
  }

  /// Positive rational multiple with coprime integer coefficients.
  Polynomial primitive() const {
    if (is_zero()) return *this;
    Integer l = 1, g = 0;
    for (const auto& a : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.get_den_mpz_t());
    std::vector<Rational> out;
    out.reserve(c_.size());
    for (const auto& a : c_) {
      Integer v = a.get_num() * (l / a.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      out.emplace_back(v);
    }
    for (auto& a : out) a /= Rational(g);
    return Polynomial(std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Rational& s, Polynomial p) {
    if (s == 0) return {};
    for (auto& a : p.c_) a *= s;
    return p;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder of a by b.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
    std::vector<Rational> r = a.c_;
    int db = b.degree();
    std::vector<Rational> q(static_cast<std::size_t>(std::max(a.degree() - db + 1, 0)));
    for (int i = a.degree(); i >= db; --i) {
      Rational t = r[static_cast<std::size_t>(i)] / b.leading();
      if (t == 0) continue;
      q[static_cast<std::size_t>(i - db)] = t;
      for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= t * b.c_[static_cast<std::size_t>(j)];
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  std::string str(const std::string& var = "X") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Rational& a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      bool neg = a < 0;
      Rational m = abs(a);
      if (!out.empty()) out += neg ? " - " : " + ";
      else if (neg) out += "-";
      if (i == 0 || m != 1) out += m.get_str();
      if (i > 0) out += (i == 0 || m != 1 ? "*" : "") + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic gcd.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = r.primitive();
  }
  return a.monic();
}

/// Yun's algorithm: returns (factor, multiplicity) pairs with squarefree,
/// pairwise coprime monic factors whose product (with multiplicities) is the
/// monic associate of p.
inline std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& p) {
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() < 1) return out;
  Polynomial f = p.monic();
  Polynomial df = f.derivative();
  Polynomial a = gcd(f, df);
  Polynomial b = divmod(f, a).first;
  Polynomial c = divmod(df, a).first;
  Polynomial d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Polynomial g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g.monic(), i);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() < 1) return p.monic();
  return divmod(p.monic(), gcd(p, p.derivative())).first.monic();
}

/// Sturm chain p0 = p, p1 = p', p_{i+1} = -rem(p_{i-1}, p_i), each scaled by a
/// positive constant to keep coefficients small.
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p) {
    if (p.is_zero()) return;
    chain_.push_back(p.primitive());
    chain_.push_back(p.derivative().primitive());
    while (!chain_.back().is_zero() && chain_.back().degree() > 0) {
      auto r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back((Rational(-1) * r).primitive());
    }
    if (chain_.back().is_zero()) chain_.pop_back();
  }

  int variations_at(const Rational& x) const {
    std::vector<int> s;
    for (const auto& q : chain_) s.push_back(q.sign_at(x));
    return count(s);
  }
  int variations_at_infinity(int dir) const {
    std::vector<int> s;
    for (const auto& q : chain_) s.push_back(q.sign_at_infinity(dir));
    return count(s);
  }

  /// Distinct real roots in (a, b].
  int count(const Rational& a, const Rational& b) const { return variations_at(a) - variations_at(b); }
  int count_above(const Rational& a) const { return variations_at(a) - variations_at_infinity(1); }
  int count_real() const { return variations_at_infinity(-1) - variations_at_infinity(1); }

 private:
  static int count(const std::vector<int>& signs) {
    int v = 0, prev = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  }
  std::vector<Polynomial> chain_;
};

/// Cauchy bound rounded up to a power of two, so that bisection points stay
/// dyadic: every complex root has modulus below it.
inline Rational root_bound(const Polynomial& p) {
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i) / p.leading())));
  Rational b = 1;
  while (b < m + 1) b *= 2;
  return b;
}

/// Shrinks an interval (lo, hi] holding exactly one root of a squarefree
/// polynomial, by exact sign bisection, to width at most `width`.
inline void refine_root_interval(const Polynomial& sqfree, Rational& lo, Rational& hi, const Rational& width) {
  int shi = sqfree.sign_at(hi);
  if (shi == 0) {
    lo = hi;
    return;
  }
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int sm = sqfree.sign_at(mid);
    if (sm == 0) {
      lo = hi = mid;
      return;
    }
    if (sm == shi) hi = mid;
    else lo = mid;
  }
}

/// Disjoint isolating intervals [lo, hi] (one real root each, ascending) of a
/// squarefree polynomial, refined to width at most `width`.
inline std::vector<std::pair<Rational, Rational>> isolate_real_roots(const Polynomial& sqfree, const Rational& width) {
  std::vector<std::pair<Rational, Rational>> out;
  if (sqfree.degree() < 1) return out;
  SturmSequence s(sqfree);
  Rational b = root_bound(sqfree);
  std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int n = s.count(lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(lo, hi);
      continue;
    }
    Rational mid = (lo + hi) / 2;
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  for (auto& [lo, hi] : out) refine_root_interval(sqfree, lo, hi, width);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eisenzero
