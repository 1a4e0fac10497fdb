#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "eisenzero/eisenstein.hpp"
#include "eisenzero/eta.hpp"
#include "eisenzero/evaluate.hpp"
#include "eisenzero/groups.hpp"
#include "eisenzero/qseries.hpp"

namespace eisenzero {

/// A weight-w form on Gamma_0(N) (N = 1 or prime) carried by its expansion at
/// infinity in q = e^{2 pi i z} and, for N > 1, by the expansion of f|S at the
/// cusp 0 in q_N = e^{2 pi i z / N}, where (f|S)(w) = w^{-w} f(-1/w).
struct ModularForm {
  int weight = 0;
  QSeries at_infinity = QSeries::zero(1, 0);
  std::optional<QSeries> at_zero;

  int truncation() const {
    int t = at_infinity.truncation();
    return at_zero ? std::min(t, at_zero->truncation()) : t;
  }
};

namespace detail {

inline std::optional<QSeries> combine_zero(const std::optional<QSeries>& a, const std::optional<QSeries>& b,
                                           QSeries (*op)(const QSeries&, const QSeries&)) {
  if (!a || !b) return std::nullopt;
  return op(*a, *b);
}

inline QSeries add_op(const QSeries& a, const QSeries& b) { return a + b; }
inline QSeries sub_op(const QSeries& a, const QSeries& b) { return a - b; }
inline QSeries mul_op(const QSeries& a, const QSeries& b) { return a * b; }

}  // namespace detail

inline ModularForm operator+(const ModularForm& f, const ModularForm& g) {
  if (f.weight != g.weight) throw Error(ErrorCode::InvalidArgument, "adding forms of different weights");
  return {f.weight, f.at_infinity + g.at_infinity, detail::combine_zero(f.at_zero, g.at_zero, detail::add_op)};
}
inline ModularForm operator-(const ModularForm& f, const ModularForm& g) {
  if (f.weight != g.weight) throw Error(ErrorCode::InvalidArgument, "subtracting forms of different weights");
  return {f.weight, f.at_infinity - g.at_infinity, detail::combine_zero(f.at_zero, g.at_zero, detail::sub_op)};
}
inline ModularForm operator*(const ModularForm& f, const ModularForm& g) {
  return {f.weight + g.weight, f.at_infinity * g.at_infinity, detail::combine_zero(f.at_zero, g.at_zero, detail::mul_op)};
}
inline ModularForm operator*(const Rational& s, ModularForm f) {
  f.at_infinity *= s;
  if (f.at_zero) *f.at_zero *= s;
  return f;
}

inline ModularForm constant_form(const Rational& c, int level, int truncation) {
  ModularForm f{0, QSeries::constant(c, 1, truncation), std::nullopt};
  if (level > 1) f.at_zero = QSeries::constant(c, level, truncation);
  return f;
}

/// Raised when E_{2k}^infinity does not exist; carries the obstruction.
class DoesNotExistError : public Error {
 public:
  DoesNotExistError(const std::string& what, std::optional<Rational> cusp_zero_value)
      : Error(ErrorCode::DoesNotExist, what), cusp_zero_value_(std::move(cusp_zero_value)) {}
  /// Constant term at the cusp 0 of the would-be Eisenstein series.
  const std::optional<Rational>& cusp_zero_value() const { return cusp_zero_value_; }

 private:
  std::optional<Rational> cusp_zero_value_;
};

namespace detail {

/// Level-one E_w with E_2 allowed (callers check modularity of the combination).
inline QSeries level1_any(int w, int truncation) { return eisenstein_unchecked(w / 2, truncation); }

/// E_w(n z) read with the given width, through exponent T-1.
inline QSeries scaled_eisenstein(int w, int n, int width, int truncation) {
  int len = (truncation + n - 1) / n;
  return rescale(level1_any(w, std::max(len, 1)), n).with_width(width).truncated(truncation);
}

inline ModularForm eisenstein_combination(const std::vector<std::pair<int, Rational>>& terms, int w, int level,
                                          int truncation) {
  ModularForm f{w, QSeries::zero(1, truncation), std::nullopt};
  if (level > 1) f.at_zero = QSeries::zero(level, truncation);
  for (const auto& [delta, a] : terms) {
    if (level % delta != 0)
      throw Error(ErrorCode::UnsupportedLevel, "scale " + std::to_string(delta) + " does not divide the level");
    f.at_infinity = f.at_infinity + a * scaled_eisenstein(w, delta, 1, truncation);
    if (level > 1) {
      // E(delta z) | S = delta^{-w} E(z / delta) = delta^{-w} E((N/delta) u).
      Rational c = a * rpow(Rational(delta), -w);
      *f.at_zero = *f.at_zero + c * scaled_eisenstein(w, level / delta, level, truncation);
    }
  }
  return f;
}

inline ModularForm eta_form(const EtaQuotientSpec& spec, int level, int truncation) {
  long tw = spec.twice_weight();
  int w = static_cast<int>(tw / 2);
  ModularForm f{w, eta_quotient(spec, truncation), std::nullopt};
  if (level == 1) return f;
  // eta(delta z)|S gives (z/(i delta))^{r/2} eta(z/delta); with even weight
  // the product is (-1)^{w/2} prod delta^{-r/2} eta((N/delta) u)^r.
  EtaQuotientSpec dual;
  Rational scale = (w / 2) % 2 == 0 ? 1 : -1;
  for (const auto& fac : spec.factors) {
    if (level % fac.scale != 0)
      throw Error(ErrorCode::UnsupportedLevel, "eta scale " + std::to_string(fac.scale) + " does not divide the level");
    dual.factors.push_back({level / fac.scale, fac.exponent});
    if (fac.exponent % 2 != 0) {
      Integer root;
      if (!mpz_perfect_square_p(Integer(fac.scale).get_mpz_t()))
        throw Error(ErrorCode::UnsupportedLevel, "irrational cusp-zero normalisation for this eta quotient");
      mpz_sqrt(root.get_mpz_t(), Integer(fac.scale).get_mpz_t());
      scale *= rpow(Rational(root), -fac.exponent);
    } else {
      scale *= rpow(Rational(fac.scale), -fac.exponent / 2);
    }
  }
  if (dual.scaled_order_24() % 24 != 0)
    throw Error(ErrorCode::UnsupportedLevel, "cusp-zero expansion has fractional exponents");
  f.at_zero = (scale * eta_quotient(dual, truncation)).with_width(level);
  return f;
}

inline ModularForm klein_j_form(int truncation) {
  auto e4 = eisenstein_level1(2, truncation + 2);
  auto delta = eta_quotient(EtaQuotientSpec{{{1, 24}}}, truncation + 2);
  return {0, (pow(e4, 3) / delta).truncated(truncation), std::nullopt};
}

}  // namespace detail

/// Builds one generator recipe with expansions through exponent T-1.
inline ModularForm build_generator(const GeneratorSpec& spec, int level, int truncation) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::eisenstein:
      return detail::eisenstein_combination(spec.terms, spec.weight, level, truncation);
    case GeneratorSpec::Kind::eta:
      return detail::eta_form(spec.eta, level, truncation);
    case GeneratorSpec::Kind::klein_j:
      if (level != 1) throw Error(ErrorCode::UnsupportedLevel, "klein_j is a level-one recipe");
      return detail::klein_j_form(truncation);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator kind");
}

// ---------------------------------------------------------------------------
// E_{2k}^infinity

inline ModularForm eisenstein_infinity_form(const GroupSpec& g, int k, int truncation) {
  if (k < 1) throw Error(ErrorCode::WeightTooSmall, "weight must be at least 2");
  if (g.level == 1) {
    if (k == 1) throw DoesNotExistError("M_2(SL2(Z)) = 0: E_2 is only quasi-modular", std::nullopt);
    return {2 * k, eisenstein_level1(k, truncation), std::nullopt};
  }
  if (!detail::is_prime(g.level))
    throw Error(ErrorCode::UnsupportedLevel, "level " + std::to_string(g.level) + " is neither 1 nor prime");
  const long p = g.level;
  if (k == 1) {
    // a E_2(pz) + b E_2(z) is modular only for a/p + b = 0; constant 1 at
    // infinity then forces a = p/(p-1), b = -1/(p-1), and the cusp-0 constant
    // a p^{-2} + b equals -1/p.
    Rational a = make_rational(p, p - 1), b = make_rational(-1, p - 1);
    Rational at_zero = a / Rational(p * p) + b;
    throw DoesNotExistError("weight 2 at level " + std::to_string(p) + ": the modular combination has cusp-0 value " +
                                at_zero.get_str(),
                            at_zero);
  }
  Integer p2k = ipow(Integer(p), static_cast<unsigned long>(2 * k));
  Rational den(p2k - 1);
  std::vector<std::pair<int, Rational>> terms{{static_cast<int>(p), Rational(p2k) / den}, {1, Rational(-1) / den}};
  return detail::eisenstein_combination(terms, 2 * k, g.level, truncation);
}

/// E_{2k}^infinity at infinity: constant term 1 there and 0 at every other cusp.
inline QSeries eisenstein_infinity(const GroupSpec& g, int k, int truncation) {
  return eisenstein_infinity_form(g, k, truncation).at_infinity;
}

enum class AlphaReading {
  three_divides_d,  // alpha(d) = 1 iff 3 | d
  d_divides_three,  // alpha(d) = 1 iff d | 3, the literal reading of "3 = 0 mod d"
};

/// 1 - 8k / (B_{2k} (3^{2k} - 1)) sum_n delta_{2k-1}(n) q^n with
/// delta(n) = sum_{d | n} alpha(d) d^{2k-1} and alpha = 1 or -1/2.
inline QSeries eisenstein_divisor_formula(int k, int truncation, AlphaReading reading) {
  std::vector<Rational> c(static_cast<std::size_t>(truncation));
  c[0] = 1;
  Rational factor = Rational(-8 * k) / (bernoulli(static_cast<unsigned>(2 * k)) *
                                        Rational(ipow(Integer(3), static_cast<unsigned long>(2 * k)) - 1));
  Rational half = make_rational(-1, 2);
  for (int d = 1; d < truncation; ++d) {
    bool one = reading == AlphaReading::three_divides_d ? d % 3 == 0 : 3 % d == 0;
    Rational term = (one ? Rational(1) : half) * Rational(ipow(Integer(d), static_cast<unsigned long>(2 * k - 1)));
    for (int n = d; n < truncation; n += d) c[static_cast<std::size_t>(n)] += factor * term;
  }
  return QSeries(1, 0, std::move(c), truncation);
}

// ---------------------------------------------------------------------------
// Hauptmodul

struct CoefficientComparison {
  int exponent = 0;
  Rational computed;
  Rational reference;
  bool match = false;
};

struct Hauptmodul {
  ModularForm form;  // weight 0, q^{-1} + 0 + O(q)
  std::vector<CoefficientComparison> comparison;
  bool reference_mismatch = false;

  const QSeries& series() const { return form.at_infinity; }
  /// Value at the cusp 0 (constant term of the cusp-0 expansion), if any.
  std::optional<Rational> cusp_zero_value() const {
    if (!form.at_zero) return std::nullopt;
    return form.at_zero->coeff(0);
  }
};

inline Hauptmodul hauptmodul(const GroupSpec& g, int truncation) {
  if (truncation < 2) throw Error(ErrorCode::TruncationTooShort, "hauptmodul needs truncation >= 2");
  ModularForm f = build_generator(g.hauptmodul.recipe, g.level, truncation);
  if (f.weight != 0) throw Error(ErrorCode::RecipeInvalid, "hauptmodul recipe has nonzero weight");
  Rational shift = g.hauptmodul.constant;
  f.at_infinity = f.at_infinity.add_constant(shift);
  Rational residual = f.at_infinity.coeff(0);
  if (residual != 0) {
    shift -= residual;
    f.at_infinity = f.at_infinity.add_constant(-residual);
  }
  if (f.at_zero) *f.at_zero = f.at_zero->add_constant(shift);
  const auto& s = f.at_infinity;
  if (s.is_zero() || s.valuation() != -1 || s.leading() != 1)
    throw Error(ErrorCode::RecipeInvalid, "recipe does not give q^{-1} + O(q): " + to_string(s));
  Hauptmodul h{f, {}, false};
  const auto& ref = g.hauptmodul.reference_coefficients;
  for (std::size_t i = 0; i < ref.size() && static_cast<int>(i) + 1 < s.truncation(); ++i) {
    int n = static_cast<int>(i) + 1;
    CoefficientComparison c{n, s.coeff(n), ref[i], s.coeff(n) == ref[i]};
    h.reference_mismatch = h.reference_mismatch || !c.match;
    h.comparison.push_back(c);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Echelon bases

struct EchelonBasis {
  int weight = 0;  // 2k
  std::vector<ModularForm> elements;
  std::vector<int> pivot_orders;
};

namespace detail {

/// Incremental row reduction keyed by q-order at infinity. Rows stay sorted by
/// pivot, each with pivot coefficient 1 and zeros at the other pivots.
class EchelonBuilder {
 public:
  explicit EchelonBuilder(int truncation) : truncation_(truncation) {}

  void insert(ModularForm f) {
    f.at_infinity = f.at_infinity.truncated(truncation_);
    if (f.at_zero) *f.at_zero = f.at_zero->truncated(std::min(truncation_, f.at_zero->truncation()));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Rational c = f.at_infinity.coeff(pivots_[i]);
      if (c != 0) f = f - c * rows_[i];
    }
    if (f.at_infinity.is_zero()) return;
    int p = f.at_infinity.valuation();
    f = (1 / f.at_infinity.leading()) * f;
    for (auto& row : rows_) {
      Rational c = row.at_infinity.coeff(p);
      if (c != 0) row = row - c * f;
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(f));
  }

  std::size_t rank() const { return rows_.size(); }
  std::vector<ModularForm>& rows() { return rows_; }
  std::vector<int>& pivots() { return pivots_; }

 private:
  int truncation_;
  std::vector<ModularForm> rows_;
  std::vector<int> pivots_;
};

}  // namespace detail

/// Echelon bases of M_{2j} for j = 0..k, built weight by weight: the spanning
/// set at weight w is {g b : g a generator of weight w_g <= w, b in basis(w - w_g)}.
inline std::vector<EchelonBasis> echelon_ladder(const GroupSpec& g, int k, int truncation) {
  std::vector<ModularForm> gens;
  for (const auto& spec : g.generators) gens.push_back(build_generator(spec, g.level, truncation));
  std::vector<EchelonBasis> ladder;
  ladder.push_back({0, {constant_form(1, g.level, truncation)}, {0}});
  for (int j = 1; j <= k; ++j) {
    int w = 2 * j;
    int d = dimension(g, j);
    if (truncation <= d)
      throw Error(ErrorCode::TruncationTooShort,
                  "truncation " + std::to_string(truncation) + " cannot resolve dimension " + std::to_string(d));
    detail::EchelonBuilder builder(truncation);
    for (const auto& gen : gens) {
      if (gen.weight > w || (w - gen.weight) % 2 != 0) continue;
      for (const auto& b : ladder[static_cast<std::size_t>((w - gen.weight) / 2)].elements) {
        builder.insert(gen * b);
        if (static_cast<int>(builder.rank()) > d) break;
      }
    }
    if (static_cast<int>(builder.rank()) != d)
      throw Error(ErrorCode::RankMismatch, "weight " + std::to_string(w) + ": spanning set has rank " +
                                               std::to_string(builder.rank()) + ", expected " + std::to_string(d));
    ladder.push_back({w, std::move(builder.rows()), std::move(builder.pivots())});
  }
  return ladder;
}

inline EchelonBasis echelon_basis(const GroupSpec& g, int k, int truncation) {
  return std::move(echelon_ladder(g, k, truncation).back());
}

/// Default truncation: dimension plus 16 guard terms.
inline int default_truncation(const GroupSpec& g, int k) { return dimension(g, k) + 16; }

/// The extremal form: last echelon element, q^{d-1} + O(q^d).
inline ModularForm upsilon_form(const GroupSpec& g, int k, int truncation) {
  int d = dimension(g, k);
  if (d < 1) throw Error(ErrorCode::DoesNotExist, "M_" + std::to_string(2 * k) + " is zero");
  auto basis = echelon_basis(g, k, truncation);
  ModularForm u = basis.elements.back();
  if (basis.pivot_orders.back() != d - 1 || u.at_infinity.leading() != 1)
    throw Error(ErrorCode::RankMismatch, "extremal element does not start at q^(d-1)");
  return u;
}

inline QSeries upsilon(const GroupSpec& g, int k, int truncation) { return upsilon_form(g, k, truncation).at_infinity; }

/// Divisor of the extremal form implied by its construction: order d-1 at
/// infinity and the forced orders at the elliptic classes.
inline std::vector<DivisorEntry> upsilon_divisor(const GroupSpec& g, int k) {
  std::vector<DivisorEntry> div{{"inf", dimension(g, k) - 1, 1}};
  for (const auto& [cls, e] : g.elliptic_classes())
    div.push_back({"elliptic:" + std::to_string(cls), trivial_order(g, cls, k), e});
  return div;
}

// ---------------------------------------------------------------------------
// Evaluation using whichever cusp expansion converges faster

class FormEvaluator {
 public:
  FormEvaluator(const ModularForm& f, Precision prec, EvalOptions options = {})
      : weight_(f.weight), prec_(prec), inf_(f.at_infinity, prec, options) {
    if (f.at_zero) zero_.emplace(*f.at_zero, prec, options);
  }

  /// True when the cusp-0 expansion has the smaller |q| at z.
  bool prefers_zero(const Complex& z) const {
    if (!zero_) return false;
    Complex w = cusp_zero_coordinate(z);
    return zero_->q_modulus(w) < inf_.q_modulus(z);
  }

  static Complex cusp_zero_coordinate(const Complex& z) {
    Complex m1(Real(-1L, z.precision()), Real(z.precision()));
    return m1 / z;
  }

  SeriesValue operator()(const Complex& z) const {
    if (!prefers_zero(z)) return inf_.evaluate(z);
    Complex w = cusp_zero_coordinate(z);
    SeriesValue v = zero_->evaluate(w);
    Complex factor = pow(w, weight_);
    v.value = v.value * factor;
    v.tail_bound = v.tail_bound * abs(factor);
    return v;
  }

  Precision precision() const { return prec_; }

 private:
  int weight_;
  Precision prec_;
  PreparedSeries inf_;
  std::optional<PreparedSeries> zero_;
};

/// Double-precision counterpart for quadrature.
class DoubleFormEvaluator {
 public:
  explicit DoubleFormEvaluator(const ModularForm& f) : weight_(f.weight), inf_(f.at_infinity) {
    if (f.at_zero) zero_.emplace(*f.at_zero);
  }

  std::complex<double> operator()(std::complex<double> z) const {
    if (zero_) {
      std::complex<double> w = -1.0 / z;
      if (zero_->q_modulus(w) < inf_.q_modulus(z)) return std::pow(w, weight_) * (*zero_)(w);
    }
    return inf_(z);
  }
  /// Evaluates the cusp-0 expansion directly at w = -1/z.
  std::complex<double> at_zero_coordinate(std::complex<double> w) const { return (*zero_)(w); }
  bool has_zero() const { return zero_.has_value(); }
  int weight() const { return weight_; }

 private:
  int weight_;
  DoubleSeries inf_;
  std::optional<DoubleSeries> zero_;
};

}  // namespace eisenzero
