#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eisenzero/forms.hpp"

namespace eisenzero {

/// The hauptmodul and its z-derivative, each evaluated from whichever cusp
/// expansion has the smaller |q|.
class JField {
 public:
  JField(const GroupSpec& g, Precision prec)
      : JField(eisenzero::hauptmodul(g, default_truncation_for(prec)), g.cusp_width, prec) {}

  JField(Hauptmodul h, int width, Precision prec)
      : h_(std::move(h)),
        width_(width),
        prec_(prec),
        inf_(h_.series(), prec),
        dinf_(q_derivative(h_.series()), prec) {
    if (h_.form.at_zero) {
      zero_.emplace(*h_.form.at_zero, prec);
      dzero_.emplace(q_derivative(*h_.form.at_zero), prec);
    }
  }

  /// Enough terms for |q|^T below 2^-prec on the builtin domains (|q| <= 0.17).
  static int default_truncation_for(Precision prec) { return static_cast<int>(prec) / 2 + 24; }

  const Hauptmodul& hauptmodul() const { return h_; }
  Precision precision() const { return prec_; }
  std::optional<Rational> cusp_zero_value() const { return h_.cusp_zero_value(); }

  bool uses_zero(const Complex& z) const {
    if (!zero_) return false;
    return zero_->q_modulus(FormEvaluator::cusp_zero_coordinate(z)) < inf_.q_modulus(z);
  }

  Complex value(const Complex& z) const {
    if (uses_zero(z)) return zero_->evaluate(FormEvaluator::cusp_zero_coordinate(z)).value;
    return inf_.evaluate(z).value;
  }

  /// dj/dz.
  Complex derivative(const Complex& z) const {
    if (uses_zero(z)) {
      Complex w = FormEvaluator::cusp_zero_coordinate(z);
      Complex theta = dzero_->evaluate(w).value;
      // dJ0/dw = (2 pi i / N) theta J0, dw/dz = 1/z^2
      Complex coef(Real(prec_), Real::pi(prec_) * 2L / static_cast<long>(zero_->width()));
      return coef * theta / (z * z);
    }
    Complex theta = dinf_.evaluate(z).value;
    Complex coef(Real(prec_), Real::pi(prec_) * 2L / static_cast<long>(width_));
    return coef * theta;
  }

 private:
  Hauptmodul h_;
  int width_;
  Precision prec_;
  PreparedSeries inf_, dinf_;
  std::optional<PreparedSeries> zero_, dzero_;
};

/// Left corner of the domain, -h/2 + i y0.
inline Complex corner_point(const GroupSpec& g, Precision prec) {
  return Complex(Real(make_rational(-g.cusp_width, 2), prec), g.y0.to_real(prec));
}

/// Theorem interval endpoint j(-h/2 + i y0).
inline Real interval_endpoint(const JField& j, const GroupSpec& g) {
  return j.value(corner_point(g, j.precision())).re;
}

// ---------------------------------------------------------------------------
// Boundary trace

struct TraceSample {
  Real t;  // arc parameter in units of pi, or y on the vertical line
  Complex z;
  Complex j;
  Real y_prime;
  Complex dj;  // (j o z)'(t)
};

struct TracePiece {
  int arc_id = -1;  // -1 is the vertical line Re z = -h/2
  std::vector<TraceSample> samples;
  int skipped_near_cusp = 0;
};

struct BoundaryTrace {
  std::vector<TracePiece> pieces;
  Real max_abs_im_j;
  int skipped_near_cusp = 0;
};

struct GeometryOptions {
  Precision precision = 128;
  int samples_per_arc = 256;
  double cusp_cutoff = 1e-3;     // arc-length fraction excluded next to a cusp
  double vertical_extent = 1.5;  // y range above y0 sampled on the vertical line
};

namespace detail {

inline bool near_cusp(const ArcSpec& a, const Rational& t, double cutoff) {
  double span = std::abs(Rational(a.t_end - a.t_start).get_d());
  for (const Rational* end : {&a.t_start, &a.t_end})
    if (a.touches_real_axis_at(*end) && std::abs(Rational(t - *end).get_d()) < cutoff * span) return true;
  return false;
}

inline TraceSample arc_sample(const JField& j, const ArcSpec& a, const Real& t) {
  Precision prec = t.precision();
  Complex z = a.point(t);
  Complex dz = a.derivative(t);
  // Derivatives are per unit of t, which is measured in units of pi.
  Real pi = Real::pi(prec);
  Real yp = dz.im * pi;
  Complex dj = j.derivative(z) * dz * pi;
  return {t, z, j.value(z), yp, dj};
}

}  // namespace detail

inline BoundaryTrace trace_boundary(const GroupSpec& g, const JField& j, const GeometryOptions& opt = {}) {
  if (g.arcs.empty()) throw Error(ErrorCode::InvalidArgument, "group has no arcs");
  if (opt.samples_per_arc < 64) throw Error(ErrorCode::InvalidArgument, "at least 64 samples per arc");
  Precision prec = j.precision();
  BoundaryTrace out;
  out.max_abs_im_j = Real(prec);

  TracePiece line;
  line.arc_id = -1;
  Real y0 = g.y0.to_real(prec);
  Real x(make_rational(-g.cusp_width, 2), prec);
  for (int i = 0; i <= opt.samples_per_arc; ++i) {
    Real y = y0 + Real(opt.vertical_extent * i / opt.samples_per_arc, prec);
    Complex z(x, y);
    Complex dj = j.derivative(z);
    // z'(y) = i
    Complex djdy(-dj.im, dj.re);
    line.samples.push_back({y, z, j.value(z), Real(1L, prec), djdy});
  }
  out.pieces.push_back(std::move(line));

  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const ArcSpec& arc = g.arcs[a];
    TracePiece piece;
    piece.arc_id = static_cast<int>(a);
    for (int i = 0; i <= opt.samples_per_arc; ++i) {
      Rational t = arc.t_start + (arc.t_end - arc.t_start) * make_rational(i, opt.samples_per_arc);
      if (detail::near_cusp(arc, t, opt.cusp_cutoff)) {
        ++piece.skipped_near_cusp;
        continue;
      }
      piece.samples.push_back(detail::arc_sample(j, arc, Real(t, prec)));
    }
    out.skipped_near_cusp += piece.skipped_near_cusp;
    out.pieces.push_back(std::move(piece));
  }
  for (const auto& p : out.pieces)
    for (const auto& s : p.samples) out.max_abs_im_j = max(out.max_abs_im_j, abs(s.j.im));
  return out;
}

inline void write_trace_csv(std::ostream& os, const BoundaryTrace& tr) {
  os << "piece,t,x,y,re_j,im_j,y_prime,re_dj,im_dj\n";
  for (const auto& p : tr.pieces)
    for (const auto& s : p.samples)
      os << p.arc_id << ',' << s.t.to_string(17) << ',' << s.z.re.to_string(17) << ',' << s.z.im.to_string(17) << ','
         << s.j.re.to_string(17) << ',' << s.j.im.to_string(6) << ',' << s.y_prime.to_string(17) << ','
         << s.dj.re.to_string(17) << ',' << s.dj.im.to_string(6) << '\n';
}

// ---------------------------------------------------------------------------
// Crit(F) and c

enum class CritKind { zero, undefined };

inline const char* to_string(CritKind k) { return k == CritKind::zero ? "zero" : "undefined"; }

struct CritPoint {
  int arc_id = 0;
  Real t;
  Complex z;
  CritKind kind = CritKind::zero;
  bool numerator_zero = false;    // y' = 0
  bool denominator_zero = false;  // (j o z)' = 0
  bool sign_change = false;
  int class_id = -1;
};

struct CritSet {
  std::vector<CritPoint> points;
  int c_value = 0;
  int n_classes = 0;
  bool classes_consistent = true;  // identified points agree on sign_change
  int unmatched_images = 0;        // identification images with no crit point on the target arc
};

namespace detail {

/// Sign of Re (j o z)' on an arc at parameter t.
inline int dj_sign(const JField& j, const ArcSpec& a, const Real& t) {
  return arc_sample(j, a, t).dj.re.sign();
}

inline int ratio_sign(const JField& j, const ArcSpec& a, const Real& t) {
  TraceSample s = arc_sample(j, a, t);
  return s.y_prime.sign() * s.dj.re.sign();
}

/// Bisects a sign change of Re (j o z)' between lo and hi down to 2^-(prec-8).
inline Real refine_dj_zero(const JField& j, const ArcSpec& a, Real lo, Real hi) {
  Precision prec = lo.precision();
  int slo = dj_sign(j, a, lo);
  Real width = ldexp(Real(1L, prec), -static_cast<long>(prec - 8));
  for (int it = 0; it < static_cast<int>(prec) + 16 && abs(hi - lo) > width; ++it) {
    Real mid = (lo + hi) / 2L;
    int s = dj_sign(j, a, mid);
    if (s == 0) return mid;
    if (s == slo) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2L;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace detail

/// Locates the parameter points on the lower arcs where y'/(j o z)' vanishes
/// or is undefined, decides which of them change sign, and counts the
/// sign-changing classes up to the declared identifications.
inline CritSet crit_and_c(const GroupSpec& g, const JField& j, const GeometryOptions& opt = {}) {
  Precision prec = j.precision();
  CritSet out;
  const Rational half = make_rational(1, 2);
  for (std::size_t ai = 0; ai < g.arcs.size(); ++ai) {
    const ArcSpec& arc = g.arcs[ai];
    Rational lo_t = std::min(arc.t_start, arc.t_end), hi_t = std::max(arc.t_start, arc.t_end);
    double span = Rational(hi_t - lo_t).get_d();
    std::vector<CritPoint> found;

    // y' = r cos(pi t) vanishes only at the apex.
    if (lo_t < half && half < hi_t) {
      CritPoint p;
      p.arc_id = static_cast<int>(ai);
      p.t = Real(half, prec);
      p.numerator_zero = true;
      found.push_back(p);
    }

    // Sign changes of Re (j o z)' over the interior samples.
    std::optional<Real> prev_t;
    int prev_s = 0;
    for (int i = 1; i < opt.samples_per_arc; ++i) {
      Rational t = lo_t + (hi_t - lo_t) * make_rational(i, opt.samples_per_arc);
      if (detail::near_cusp(arc, t, opt.cusp_cutoff)) continue;
      Real tr(t, prec);
      int s = detail::dj_sign(j, arc, tr);
      if (s == 0) continue;
      if (prev_t && prev_s != s) {
        Real tz = detail::refine_dj_zero(j, arc, *prev_t, tr);
        bool merged = false;
        for (auto& p : found)
          if (abs(p.t - tz).to_double() < 1e-8 * span) {
            p.denominator_zero = true;
            merged = true;
          }
        if (!merged) {
          CritPoint p;
          p.arc_id = static_cast<int>(ai);
          p.t = tz;
          p.denominator_zero = true;
          found.push_back(p);
        }
      }
      prev_t = tr;
      prev_s = s;
    }

    std::sort(found.begin(), found.end(), [](const CritPoint& a, const CritPoint& b) { return a.t < b.t; });
    Real delta(1e-6 * span, prec);
    for (std::size_t i = 0; i + 1 < found.size(); ++i)
      if (found[i + 1].t - found[i].t < delta * 10L)
        throw Error(ErrorCode::NonIsolatedCrit, "crit points closer than the resolution on arc " + std::to_string(ai));
    for (auto& p : found) {
      p.kind = p.denominator_zero ? CritKind::undefined : CritKind::zero;
      p.z = arc.point(p.t);
      p.sign_change = detail::ratio_sign(j, arc, p.t - delta) != detail::ratio_sign(j, arc, p.t + delta);
      out.points.push_back(std::move(p));
    }
  }

  // Classes under the identifications.
  int n = static_cast<int>(out.points.size());
  detail::UnionFind uf(n);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& id : g.identifications) {
    for (int i = 0; i < n; ++i) {
      const auto& p = out.points[static_cast<std::size_t>(i)];
      if (p.arc_id != id.source_arc) continue;
      Complex w = id.apply(p.z);
      bool matched = false;
      for (int k = 0; k < n; ++k) {
        const auto& q = out.points[static_cast<std::size_t>(k)];
        if (q.arc_id == id.target_arc && abs(q.z - w).to_double() < 1e-6) {
          uf.unite(i, k);
          pairs.emplace_back(i, k);
          matched = true;
        }
      }
      if (!matched) ++out.unmatched_images;
    }
  }
  for (auto [a, b] : pairs)
    if (out.points[static_cast<std::size_t>(a)].sign_change != out.points[static_cast<std::size_t>(b)].sign_change)
      out.classes_consistent = false;
  std::vector<int> root_to_class(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    if (root_to_class[static_cast<std::size_t>(r)] < 0) {
      root_to_class[static_cast<std::size_t>(r)] = out.n_classes++;
      if (out.points[static_cast<std::size_t>(i)].sign_change) ++out.c_value;
    }
    out.points[static_cast<std::size_t>(i)].class_id = root_to_class[static_cast<std::size_t>(r)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inversion of j along the boundary

struct BoundaryPoint {
  Complex z;
  int arc_id = -1;  // -1 is the vertical line
  Real t;           // arc parameter (units of pi) or y on the vertical line
  bool at_cusp = false;
};

namespace detail {

template <class F>
std::optional<Real> bisect_level(const F& f, Real a, Real b, const Real& target, const Real& tol) {
  Real fa = f(a) - target, fb = f(b) - target;
  if (abs(fa) < tol) return a;
  if (abs(fb) < tol) return b;
  if (fa.sign() == fb.sign()) return std::nullopt;
  Precision prec = a.precision();
  for (int it = 0; it < 4 * static_cast<int>(prec); ++it) {
    Real m = (a + b) / 2L;
    Real fm = f(m) - target;
    if (abs(fm) < tol) return m;
    if (fm.sign() == fa.sign()) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  throw Error(ErrorCode::PrecisionExhausted, "bisection did not reach the tolerance");
}

}  // namespace detail

/// Finds z on the boundary (vertical line or lower arcs) with
/// |j(z) - target| < 2^-(prec - 32) max(1, |target|), where prec is the
/// working precision of j. Arcs are split at the crit parameters so each
/// piece is monotone.
inline BoundaryPoint invert_j_on_boundary(const GroupSpec& g, const JField& j, const CritSet& crit, const Real& target) {
  Precision prec = j.precision();
  Real one(1L, prec);
  Real tol = ldexp(max(one, abs(target)), -static_cast<long>(prec - 32));

  if (auto c0 = j.cusp_zero_value(); c0 && abs(Real(*c0, prec) - target) < tol) {
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      const auto& arc = g.arcs[a];
      for (const Rational* end : {&arc.t_start, &arc.t_end}) {
        if (!arc.touches_real_axis_at(*end)) continue;
        Complex z = arc.point(Real(*end, prec));
        if (abs(z).to_double() < 1e-12) return {Complex(Real(prec), Real(prec)), static_cast<int>(a), Real(*end, prec), true};
      }
    }
  }

  // Vertical line: j decreases to -infinity as y grows.
  Real x(make_rational(-g.cusp_width, 2), prec);
  auto on_line = [&](const Real& y) { return j.value(Complex(x, y)).re; };
  Real y0 = g.y0.to_real(prec);
  Real y_hi = y0 + one;
  for (int step = 0; step < 8; ++step) {
    if (auto y = detail::bisect_level(on_line, y0, y_hi, target, tol)) return {Complex(x, *y), -1, *y, false};
    y_hi = y_hi * 2L;
  }

  for (std::size_t ai = 0; ai < g.arcs.size(); ++ai) {
    const ArcSpec& arc = g.arcs[ai];
    std::vector<Real> cuts{Real(arc.t_start, prec)};
    std::vector<Real> inner;
    for (const auto& p : crit.points)
      if (p.arc_id == static_cast<int>(ai)) inner.push_back(p.t);
    std::sort(inner.begin(), inner.end(), [&](const Real& a, const Real& b) {
      return arc.t_end < arc.t_start ? b < a : a < b;
    });
    for (auto& t : inner) cuts.push_back(t);
    cuts.push_back(Real(arc.t_end, prec));
    // Step off a cusp endpoint; the value there is the cusp limit.
    Real eps = ldexp(one, -static_cast<long>(prec / 4));
    if (arc.touches_real_axis_at(arc.t_start)) cuts.front() += (arc.t_end > arc.t_start ? eps : -eps);
    if (arc.touches_real_axis_at(arc.t_end)) cuts.back() += (arc.t_end > arc.t_start ? -eps : eps);
    auto on_arc = [&](const Real& t) { return j.value(arc.point(t)).re; };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (auto t = detail::bisect_level(on_arc, cuts[i], cuts[i + 1], target, tol))
        return {arc.point(*t), static_cast<int>(ai), *t, false};
  }
  throw Error(ErrorCode::NotFound, "no boundary point with j = " + target.to_string(20));
}

}  // namespace eisenzero
