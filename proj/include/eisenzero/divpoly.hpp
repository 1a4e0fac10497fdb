#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "eisenzero/forms.hpp"
#include "eisenzero/polynomial.hpp"

namespace eisenzero {

struct DivisorPoly {
  Polynomial poly;
  std::string group;
  int weight = 0;  // 2k
};

/// Writes a weight-0 series with a pole of order m at infinity as a polynomial
/// in the hauptmodul by greedily cancelling the most negative exponent.
inline Polynomial to_j_polynomial(const QSeries& g, const Hauptmodul& j, int guard = 4) {
  const QSeries& js = j.series();
  if (g.is_zero()) return {};
  int m = -g.valuation();
  if (m < 0) throw Error(ErrorCode::NotPolynomial, "series vanishes at infinity but is not zero");
  std::vector<Rational> c(static_cast<std::size_t>(m + 1));
  std::vector<QSeries> powers{QSeries::constant(1, 1, js.truncation())};
  for (int p = 1; p <= m; ++p) powers.push_back(powers.back() * js);
  QSeries r = g;
  for (int p = m; p >= 0; --p) {
    Rational a = r.coeff(-p);
    c[static_cast<std::size_t>(p)] = a;
    if (a != 0) r = r - a * powers[static_cast<std::size_t>(p)];
  }
  if (r.truncation() < 1 + guard)
    throw Error(ErrorCode::TruncationTooShort,
                "only O(q^" + std::to_string(r.truncation()) + ") left to confirm the polynomial identity");
  if (!r.is_zero())
    throw Error(ErrorCode::NotPolynomial, "remainder " + to_string(r, 3) + " is not zero within the truncation");
  return Polynomial(std::move(c));
}

/// Forms and hauptmodul for one group at a fixed truncation, reused across a
/// range of weights.
class WeightContext {
 public:
  WeightContext(GroupSpec group, int max_k, int truncation = 0)
      : group_(std::move(group)), max_k_(max_k), truncation_(truncation) {
    if (truncation_ <= 0) truncation_ = 2 * dimension(group_, max_k_) + 16;
    build();
  }

  const GroupSpec& group() const { return group_; }
  int max_k() const { return max_k_; }
  int truncation() const { return truncation_; }
  const Hauptmodul& hauptmodul_form() const { return *haupt_; }
  const EchelonBasis& basis(int k) const { return ladder_.at(static_cast<std::size_t>(k)); }

  ModularForm upsilon(int k) const {
    if (dimension(group_, k) < 1) throw Error(ErrorCode::DoesNotExist, "M_" + std::to_string(2 * k) + " is zero");
    return basis(k).elements.back();
  }

  ModularForm eisenstein(int k) const { return eisenstein_infinity_form(group_, k, truncation_); }

  /// Doubles the truncation (used on TruncationTooShort).
  void grow() {
    truncation_ *= 2;
    build();
  }

 private:
  void build() {
    ladder_ = echelon_ladder(group_, max_k_, truncation_);
    haupt_ = eisenzero::hauptmodul(group_, truncation_);
  }

  GroupSpec group_;
  int max_k_;
  int truncation_;
  std::vector<EchelonBasis> ladder_;
  std::optional<Hauptmodul> haupt_;
};

/// P(E_{2k}^infinity, X) = E / Upsilon written in the hauptmodul.
inline DivisorPoly divisor_polynomial(WeightContext& ctx, int k, int max_doublings = 3) {
  for (int attempt = 0;; ++attempt) {
    try {
      ModularForm e = ctx.eisenstein(k);
      ModularForm u = ctx.upsilon(k);
      Polynomial p = to_j_polynomial(e.at_infinity / u.at_infinity, ctx.hauptmodul_form());
      int d = dimension(ctx.group(), k);
      if (p.degree() != d - 1)
        throw Error(ErrorCode::NotPolynomial, "degree " + std::to_string(p.degree()) + " differs from d-1");
      return {std::move(p), ctx.group().name, 2 * k};
    } catch (const Error& err) {
      if (err.code() != ErrorCode::TruncationTooShort || attempt >= max_doublings) throw;
      ctx.grow();
    }
  }
}

inline DivisorPoly divisor_polynomial(const GroupSpec& g, int k, int truncation = 0) {
  WeightContext ctx(g, k, truncation);
  return divisor_polynomial(ctx, k);
}

// ---------------------------------------------------------------------------
// Exact real-root analysis

struct RealRootAnalysis {
  int n_real = 0;                 // distinct real roots
  int n_in_interval = 0;          // distinct roots certainly above the endpoint bracket
  int n_endpoint_ambiguous = 0;   // distinct roots inside the endpoint bracket
  Rational bracket_lo, bracket_hi;
  std::vector<std::pair<Rational, Rational>> isolating_intervals;
};

/// Outward rational bracket [lo, hi] of width 10^-digits around a.
inline std::pair<Rational, Rational> rational_bracket(const Real& a, int digits = 25) {
  Integer scale = ipow(Integer(10), static_cast<unsigned long>(digits));
  Real scaled = a * Real(Rational(scale), std::max<Precision>(a.precision(), 128));
  Integer fl;
  mpfr_get_z(fl.get_mpz_t(), scaled.get(), MPFR_RNDD);
  Rational lo(fl, scale);
  lo.canonicalize();
  Rational hi(fl + 1, scale);
  hi.canonicalize();
  return {lo, hi};
}

inline Rational default_isolation_width() { return Rational(Integer(1), ipow(Integer(10), 20)); }

/// Sturm counts over the squarefree part of P on [a, +infinity); isolating
/// intervals for all real roots, refined to the given width.
inline RealRootAnalysis real_root_analysis(const Polynomial& p, const Real& a,
                                           const Rational& width = default_isolation_width()) {
  RealRootAnalysis out;
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero polynomial");
  Polynomial sf = squarefree_part(p);
  auto [lo, hi] = rational_bracket(a);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  if (sf.degree() < 1) return out;
  SturmSequence s(sf);
  out.n_real = s.count_real();
  out.n_in_interval = s.count_above(hi);
  out.n_endpoint_ambiguous = s.count(lo, hi) + (sf.sign_at(lo) == 0 ? 1 : 0);
  out.isolating_intervals = isolate_real_roots(sf, width);
  return out;
}

inline RealRootAnalysis real_root_analysis(const DivisorPoly& p, const Real& a) { return real_root_analysis(p.poly, a); }

// ---------------------------------------------------------------------------
// Certified complex roots

struct CertifiedRoot {
  Real re;
  Real im;
  Real radius;
  int multiplicity = 1;
  bool is_real = false;
};

namespace detail {

/// floor(log2 |x|) for nonzero x, 0 for x = 0.
inline long ilog2(const Rational& x) {
  if (x == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

/// Real roots of a squarefree factor from exact isolating intervals refined
/// to relative width 2^-(prec/2); the radius is half the final interval.
inline std::vector<CertifiedRoot> exact_real_roots(const Polynomial& f, Precision prec, int multiplicity) {
  std::vector<CertifiedRoot> out;
  for (auto [lo, hi] : isolate_real_roots(f, Rational(1))) {
    long e = std::max(0L, std::max(ilog2(lo), ilog2(hi)) + 1);
    Rational width = 1;
    mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), static_cast<mp_bitcnt_t>(static_cast<long>(prec / 2) - e));
    refine_root_interval(f, lo, hi, width);
    Real mid(Rational((lo + hi) / 2), prec);
    Real radius = Real(Rational((hi - lo) / 2), prec) + ldexp(abs(mid), -static_cast<long>(prec - 1));
    out.push_back({mid, Real(prec), radius, multiplicity, true});
  }
  return out;
}

/// Aberth iteration for the nonreal roots of a squarefree factor, with its
/// real roots held at the given values. Inclusion radii are
/// n |f(z_i)| / |lc prod_{j != i} (z_i - z_j)| with the Horner rounding error
/// added to the residual.
inline std::vector<CertifiedRoot> aberth_nonreal(const Polynomial& f, const std::vector<CertifiedRoot>& reals,
                                                 Precision prec, int multiplicity) {
  int n = f.degree();
  int n_fixed = static_cast<int>(reals.size());
  Polynomial df = f.derivative();
  Real bound(root_bound(f), prec);
  std::vector<Complex> z;
  for (const auto& r : reals) z.emplace_back(Real(r.re.to_rational(), prec), Real(prec));
  int n_free = n - n_fixed;
  for (int i = 0; i < n_free; ++i) {
    // Points on a circle, rotated off the real axis to avoid symmetric stalls.
    Real theta = Real::pi(prec) * 2L * Real(static_cast<long>(i), prec) / static_cast<long>(n_free) + Real(0.4, prec);
    z.push_back(expi(theta) * (bound / 2L));
  }
  Real one_r(1L, prec);
  Complex one(one_r, Real(prec));
  Real tiny = ldexp(one_r, -static_cast<long>(prec - 16));
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int iter = 0; iter < 1000; ++iter) {
    bool all_done = true;
    for (int i = n_fixed; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (done[ui]) continue;
      Complex pv = f(z[ui]);
      if (abs(pv).is_zero()) {
        done[ui] = true;
        continue;
      }
      Complex ratio = pv / df(z[ui]);
      Complex sum(prec);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += one / (z[ui] - z[static_cast<std::size_t>(j)]);
      Complex step = ratio / (one - ratio * sum);
      z[ui] -= step;
      if (abs(step) / max(abs(z[ui]), one_r) < tiny) done[ui] = true;
      else all_done = false;
    }
    if (all_done) break;
  }
  Real lc(f.leading(), prec);
  Real eps = ldexp(one_r, -static_cast<long>(prec - 1));
  std::vector<CertifiedRoot> out;
  for (int i = n_fixed; i < n; ++i) {
    const Complex& zi = z[static_cast<std::size_t>(i)];
    Real mag = abs(zi);
    Real horner(prec), pw(1L, prec);
    for (int j = 0; j <= n; ++j) {
      horner += abs(Real(f.coeff(j), prec)) * pw;
      pw *= mag;
    }
    Real residual = abs(f(zi)) + horner * eps * Real(static_cast<long>(4 * n + 4), prec);
    Complex prod = one;
    for (int j = 0; j < n; ++j)
      if (j != i) prod *= zi - z[static_cast<std::size_t>(j)];
    Real radius = Real(static_cast<long>(n), prec) * residual / (abs(lc) * abs(prod));
    out.push_back({zi.re, zi.im, radius, multiplicity, false});
  }
  return out;
}

/// Bits needed to hold the largest coefficient of the primitive associate.
inline long coefficient_bits(const Polynomial& f) {
  long bits = 0;
  const Polynomial prim = f.primitive();
  for (const auto& c : prim.coefficients())
    bits = std::max(bits, static_cast<long>(mpz_sizeinbase(c.get_num_mpz_t(), 2)));
  return bits;
}

}  // namespace detail

/// Roots of P with multiplicities (from the exact squarefree decomposition)
/// and inclusion radii. Real roots come from exact interval refinement; the
/// nonreal ones from Aberth iteration, with precision doubled up to twice when
/// their radii miss the target (PrecisionExhausted after that).
inline std::vector<CertifiedRoot> all_roots(const Polynomial& p, Precision prec = kDefaultPrecision,
                                            std::optional<Real> target_radius = std::nullopt) {
  if (p.degree() < 1) throw Error(ErrorCode::InvalidArgument, "all_roots needs degree >= 1");
  auto factors = squarefree_decomposition(p);
  std::vector<std::vector<CertifiedRoot>> reals;
  for (const auto& [f, mult] : factors) reals.push_back(detail::exact_real_roots(f, prec, mult));

  for (int attempt = 0; attempt < 3; ++attempt, prec *= 2) {
    Real target = target_radius ? *target_radius : ldexp(Real(1L, prec), -static_cast<long>(prec / 2));
    std::vector<CertifiedRoot> roots;
    bool ok = true;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      const auto& [f, mult] = factors[fi];
      for (const auto& r : reals[fi]) roots.push_back(r);
      if (static_cast<int>(reals[fi].size()) == f.degree()) continue;
      Precision wp = prec + static_cast<Precision>(detail::coefficient_bits(f)) + 32;
      auto part = detail::aberth_nonreal(f, reals[fi], wp, mult);
      for (auto& root : part) {
        if (abs(root.im) <= root.radius) ok = false;  // not separated from the axis
        if (!(root.radius < target * max(Real(1L, wp), abs(root.re)))) ok = false;
      }
      // Nonreal roots come in conjugate pairs: symmetrize.
      for (auto& a : part) {
        if (a.im.sign() <= 0) continue;
        CertifiedRoot* best = nullptr;
        for (auto& b : part)
          if (b.im.sign() < 0 &&
              (!best || abs(b.re - a.re) + abs(b.im + a.im) < abs(best->re - a.re) + abs(best->im + a.im)))
            best = &b;
        if (!best) {
          ok = false;
          continue;
        }
        Real re = (a.re + best->re) / 2L, im = (a.im - best->im) / 2L;
        a.re = re;
        a.im = im;
        best->re = re;
        best->im = -im;
      }
      for (auto& r : part) roots.push_back(std::move(r));
    }
    if (ok) {
      std::sort(roots.begin(), roots.end(), [](const CertifiedRoot& a, const CertifiedRoot& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
      });
      return roots;
    }
  }
  throw Error(ErrorCode::PrecisionExhausted, "root radii did not reach the target after two precision doublings");
}

}  // namespace eisenzero
