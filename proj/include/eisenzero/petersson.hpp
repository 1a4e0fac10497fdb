#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "eisenzero/verify.hpp"

namespace eisenzero {

struct QuadratureSpec {
  double y_max = 0;          // 0: chosen from the integrand decay
  int nodes_per_cell = 16;
  double target_tol = 1e-7;  // relative to the integral of |f g| y^(2k-2)
  int refinement_limit = 3;  // node doublings after the first comparison
  double horn_height = 2;    // cusp-0 neighbourhood is Im(-1/z) > horn_height
  double cell_width = 0.125;
  double panel_height = 0.5;
};

struct PeterssonResult {
  std::complex<double> value;
  double error_estimate = 0;
  double abs_integral = 0;  // integral of |f| |g| y^(2k-2)
  int nodes_per_cell = 0;
  double y_max = 0;
  double v_max = 0;
};

/// A weight-2k function on H given through both cusp expansions: at_z(z) is
/// its value, at_w(w) the expansion at the cusp 0 in w = -1/z (so that
/// f(z) = w^(2k) at_w(w)). Valuations are in q_h and q_N units.
struct PeterssonOperand {
  int weight = 0;
  std::function<std::complex<double>(std::complex<double>)> at_z;
  std::function<std::complex<double>(std::complex<double>)> at_w;
  int valuation_inf = 0;
  std::optional<int> valuation_zero;
};

inline PeterssonOperand make_operand(const ModularForm& f) {
  auto ev = std::make_shared<DoubleFormEvaluator>(f);
  PeterssonOperand op;
  op.weight = f.weight;
  op.at_z = [ev](std::complex<double> z) { return (*ev)(z); };
  op.valuation_inf = f.at_infinity.valuation();
  if (f.at_zero) {
    op.at_w = [ev](std::complex<double> w) { return ev->at_zero_coordinate(w); };
    op.valuation_zero = f.at_zero->valuation();
  }
  return op;
}

/// Q(j) * u for Q given by its real roots.
inline PeterssonOperand make_q_operand(const ModularForm& u, const Hauptmodul& j, std::vector<double> q_roots) {
  auto ev = std::make_shared<DoubleFormEvaluator>(u);
  auto jv = std::make_shared<DoubleFormEvaluator>(j.form);
  auto q_of = [q_roots](std::complex<double> x) {
    std::complex<double> acc = 1.0;
    for (double r : q_roots) acc *= x - r;
    return acc;
  };
  PeterssonOperand op;
  op.weight = u.weight;
  op.at_z = [ev, jv, q_of](std::complex<double> z) { return q_of((*jv)(z)) * (*ev)(z); };
  op.valuation_inf = u.at_infinity.valuation() - static_cast<int>(q_roots.size());
  if (u.at_zero && j.form.at_zero) {
    op.at_w = [ev, jv, q_of](std::complex<double> w) { return q_of(jv->at_zero_coordinate(w)) * ev->at_zero_coordinate(w); };
    op.valuation_zero = u.at_zero->valuation() + std::min(0, j.form.at_zero->valuation()) * static_cast<int>(q_roots.size());
  }
  return op;
}

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2.0 * m - 1) * z * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = z;
    for (int m = 2; m <= n; ++m) {
      double p2 = ((2.0 * m - 1) * z * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2 / ((1 - z * z) * dp * dp);
  }
  return {x, w};
}

struct Accum {
  std::complex<double> value = 0;
  double abs = 0;
};

/// Lower boundary of the strip region: the highest arc over x, raised to the
/// top of the cusp-0 disk where that disk is cut out.
class LowerBoundary {
 public:
  LowerBoundary(const GroupSpec& g, double horn) : g_(g), horn_(g.has_cusp_zero() ? horn : 0) {}

  double arc_y(double x) const {
    double y = 0;
    for (const auto& a : g_.arcs) {
      double c = a.center_x.get_d(), r = a.radius.get_d();
      double xs = std::real(a.point(a.t_start.get_d())), xe = std::real(a.point(a.t_end.get_d()));
      if (x < std::min(xs, xe) - 1e-15 || x > std::max(xs, xe) + 1e-15) continue;
      y = std::max(y, std::sqrt(std::max(0.0, r * r - (x - c) * (x - c))));
    }
    return y;
  }

  /// Top of the disk Im(-1/z) > V, i.e. |z - i/(2V)| < 1/(2V); 0 outside it.
  double disk_top(double x) const {
    if (horn_ <= 0) return 0;
    double rho = 1 / (2 * horn_);
    if (std::abs(x) >= rho) return 0;
    return rho + std::sqrt(rho * rho - x * x);
  }
  double disk_bottom(double x) const {
    double rho = 1 / (2 * horn_);
    return rho - std::sqrt(std::max(0.0, rho * rho - x * x));
  }

  double operator()(double x) const { return std::max(arc_y(x), disk_top(x)); }

  /// Breakpoints in x where the lower boundary changes formula.
  std::vector<double> breakpoints() const {
    double h = g_.cusp_width;
    std::vector<double> b{-h / 2, h / 2};
    for (const auto& a : g_.arcs)
      for (double t : {a.t_start.get_d(), a.t_end.get_d()}) b.push_back(std::real(a.point(t)));
    if (horn_ > 0) {
      double rho = 1 / (2 * horn_);
      b.push_back(-rho);
      b.push_back(rho);
      // Where the disk top crosses the arcs, on each side of 0.
      for (double side : {-1.0, 1.0}) {
        double lo = 1e-14, hi = rho;
        auto gap = [&](double s) { return disk_top(side * s) - arc_y(side * s); };
        if (gap(lo) > 0 && gap(hi * (1 - 1e-12)) < 0) {
          for (int it = 0; it < 200; ++it) {
            double m = (lo + hi) / 2;
            (gap(m) > 0 ? lo : hi) = m;
          }
          b.push_back(side * (lo + hi) / 2);
        }
      }
      // The strip description needs the disk to lie above the arcs where it
      // is not cut out by them.
      for (int i = 1; i < 64; ++i) {
        double x = -rho + 2 * rho * i / 64.0;
        if (disk_bottom(x) > arc_y(x) + 1e-12)
          throw Error(ErrorCode::InvalidArgument, "horn height too small for this domain");
      }
    }
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double x : b)
      if (x >= -h / 2 - 1e-15 && x <= h / 2 + 1e-15 && (out.empty() || x - out.back() > 1e-13)) out.push_back(x);
    return out;
  }

 private:
  const GroupSpec& g_;
  double horn_;
};

/// Height beyond which |integrand| has dropped below `drop` times its largest
/// sampled value along a vertical line.
template <class F>
double decay_height(const F& integrand, double y_start, double drop) {
  double peak = 0, y = y_start;
  for (int i = 0; i < 4000; ++i, y += 0.05) {
    double v = integrand(y);
    peak = std::max(peak, v);
    if (y > y_start + 1 && v < drop * peak) return y;
  }
  return y;
}

}  // namespace detail

/// Petersson inner product <f, g> = integral over F of f conj(g) y^(2k-2) dx dy,
/// by tensor Gauss-Legendre quadrature: the strip above the arcs up to y_max,
/// plus (for a cusp at 0) the horn Im(-1/z) > V integrated in w = -1/z over
/// |Re w| <= N/2. The estimate compares n and 2n nodes per cell.
inline PeterssonResult petersson_inner(const PeterssonOperand& f, const PeterssonOperand& g, const GroupSpec& grp,
                                       QuadratureSpec spec = {}) {
  if (f.weight != g.weight) throw Error(ErrorCode::InvalidArgument, "weights differ");
  if (f.valuation_inf + g.valuation_inf < 1)
    throw Error(ErrorCode::PreconditionCuspGrowth, "f conj(g) does not vanish at infinity");
  bool horn = grp.has_cusp_zero();
  if (horn) {
    if (!f.at_w || !g.at_w) throw Error(ErrorCode::InvalidArgument, "cusp-0 expansions are required at this level");
    if (*f.valuation_zero + *g.valuation_zero < 1)
      throw Error(ErrorCode::PreconditionCuspGrowth, "f conj(g) does not vanish at the cusp 0");
  }
  const int two_k = f.weight;
  const double h = grp.cusp_width;
  const double N = grp.level;
  const double V = spec.horn_height;
  detail::LowerBoundary lower(grp, V);

  auto strip_abs = [&](double x, double y) {
    std::complex<double> z(x, y);
    return std::abs(f.at_z(z)) * std::abs(g.at_z(z)) * std::pow(y, two_k - 2);
  };
  auto horn_abs = [&](double u, double v) {
    std::complex<double> w(u, v);
    return std::abs(f.at_w(w)) * std::abs(g.at_w(w)) * std::pow(v, two_k - 2);
  };
  const double drop = spec.target_tol * 1e-3;
  double y_max = spec.y_max > 0 ? spec.y_max
                                : detail::decay_height([&](double y) { return strip_abs(0.0, y); },
                                                       std::max(lower(0.0), grp.y0.to_double()), drop);
  double v_max = horn ? detail::decay_height([&](double v) { return horn_abs(0.0, v); }, V, drop) : 0;

  std::vector<double> bp = lower.breakpoints();
  auto integrate = [&](int n) {
    auto [gx, gw] = detail::gauss_legendre(n);
    detail::Accum acc;
    // Strip region, cells in a fixed order.
    for (std::size_t c = 0; c + 1 < bp.size(); ++c) {
      int pieces = std::max(1, static_cast<int>(std::ceil((bp[c + 1] - bp[c]) / spec.cell_width)));
      for (int p = 0; p < pieces; ++p) {
        double xa = bp[c] + (bp[c + 1] - bp[c]) * p / pieces, xb = bp[c] + (bp[c + 1] - bp[c]) * (p + 1) / pieces;
        for (int i = 0; i < n; ++i) {
          double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * gx[static_cast<std::size_t>(i)];
          double wx = 0.5 * (xb - xa) * gw[static_cast<std::size_t>(i)];
          double ylo = lower(x);
          int panels = std::max(1, static_cast<int>(std::ceil((y_max - ylo) / spec.panel_height)));
          for (int q = 0; q < panels; ++q) {
            double ya = ylo + (y_max - ylo) * q / panels, yb = ylo + (y_max - ylo) * (q + 1) / panels;
            for (int j = 0; j < n; ++j) {
              double y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * gx[static_cast<std::size_t>(j)];
              double wt = wx * 0.5 * (yb - ya) * gw[static_cast<std::size_t>(j)] * std::pow(y, two_k - 2);
              std::complex<double> z(x, y);
              std::complex<double> a = f.at_z(z), b = g.at_z(z);
              acc.value += wt * a * std::conj(b);
              acc.abs += wt * std::abs(a) * std::abs(b);
            }
          }
        }
      }
    }
    // Horn at the cusp 0, as a rectangle in w.
    if (horn) {
      int pieces = std::max(1, static_cast<int>(std::ceil(N / spec.cell_width / 4)));
      int panels = std::max(1, static_cast<int>(std::ceil((v_max - V) / spec.panel_height)));
      for (int p = 0; p < pieces; ++p) {
        double ua = -N / 2 + N * p / pieces, ub = -N / 2 + N * (p + 1) / pieces;
        for (int i = 0; i < n; ++i) {
          double u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * gx[static_cast<std::size_t>(i)];
          double wu = 0.5 * (ub - ua) * gw[static_cast<std::size_t>(i)];
          for (int q = 0; q < panels; ++q) {
            double va = V + (v_max - V) * q / panels, vb = V + (v_max - V) * (q + 1) / panels;
            for (int j = 0; j < n; ++j) {
              double v = 0.5 * (va + vb) + 0.5 * (vb - va) * gx[static_cast<std::size_t>(j)];
              double wt = wu * 0.5 * (vb - va) * gw[static_cast<std::size_t>(j)] * std::pow(v, two_k - 2);
              std::complex<double> w(u, v);
              std::complex<double> a = f.at_w(w), b = g.at_w(w);
              acc.value += wt * a * std::conj(b);
              acc.abs += wt * std::abs(a) * std::abs(b);
            }
          }
        }
      }
    }
    return acc;
  };

  int n = spec.nodes_per_cell;
  detail::Accum coarse = integrate(n);
  for (int round = 0;; ++round) {
    detail::Accum fine = integrate(2 * n);
    double err = std::abs(fine.value - coarse.value);
    if (err <= spec.target_tol * fine.abs || round >= spec.refinement_limit) {
      if (err > spec.target_tol * fine.abs)
        throw Error(ErrorCode::NonConvergent, "quadrature error estimate above tolerance at the refinement limit");
      return {fine.value, err, fine.abs, 2 * n, y_max, v_max};
    }
    coarse = fine;
    n *= 2;
  }
}

inline PeterssonResult petersson_inner(const ModularForm& f, const ModularForm& g, const GroupSpec& grp,
                                       QuadratureSpec spec = {}) {
  return petersson_inner(make_operand(f), make_operand(g), grp, spec);
}

// ---------------------------------------------------------------------------
// Orthogonality replay

struct OrthogonalityReport {
  std::string group;
  int weight = 0;
  int dim = 0;
  std::vector<double> b_values;      // j at the sign-changing crit classes
  std::vector<double> a_roots;       // odd-multiplicity in-interval roots used
  std::vector<double> q_roots;       // roots of Q, b values first
  int dropped_factors = 0;           // factors beyond the degree cap d - 2
  bool cusp_form = false;            // Q(j) U vanishes at every cusp
  PeterssonResult inner;
  double residual = 0;               // |<E, Q(j) U>| / integral |E| |Q(j) U| y^(2k-2)
};

/// <E_{2k}^infinity, Q(j) Upsilon> with Q built from the sign-changing crit
/// classes and the odd-multiplicity in-interval roots, capped at degree d - 2
/// so that Q(j) Upsilon still vanishes at infinity.
inline OrthogonalityReport orthogonality_replay(VerifyContext& ctx, int k, QuadratureSpec spec = {}) {
  const GroupSpec& g = ctx.group();
  ZeroReport zr = verify_theorem(ctx, k);
  if (zr.status == ReportStatus::does_not_exist) throw DoesNotExistError(zr.message, zr.cusp_zero_value);
  if (zr.status != ReportStatus::ok) throw Error(ErrorCode::InvalidArgument, "verification failed: " + zr.message);
  OrthogonalityReport out;
  out.group = g.name;
  out.weight = 2 * k;
  out.dim = zr.dim;

  // Forms at a truncation suited to double evaluation on the domain.
  const int T = std::max(ctx.weights().truncation(), 60 + 2 * k);
  ModularForm e = eisenstein_infinity_form(g, k, T);
  ModularForm u = upsilon_form(g, k, T);
  Hauptmodul j = hauptmodul(g, T);

  std::set<int> seen;
  for (const auto& p : ctx.crit().points)
    if (p.sign_change && seen.insert(p.class_id).second) out.b_values.push_back(ctx.j().value(p.z).re.to_double());
  std::optional<double> cusp_root;
  for (const auto& rr : zr.roots) {
    if (!rr.in_interval || rr.root.multiplicity % 2 == 0) continue;
    if (rr.preimage && rr.preimage->at_cusp) cusp_root = rr.root.re.to_double();
    else out.a_roots.push_back(rr.root.re.to_double());
  }

  // A factor X - j(0) comes first when U does not vanish at the cusp 0:
  // it is what makes Q(j) U a cusp form.
  int cap = std::max(0, zr.dim - 2);
  auto take = [&](double r) {
    if (static_cast<int>(out.q_roots.size()) < cap) out.q_roots.push_back(r);
    else ++out.dropped_factors;
  };
  bool u_vanishes_at_zero = !u.at_zero || u.at_zero->valuation() >= 1;
  if (cusp_root && !u_vanishes_at_zero) take(*cusp_root);
  for (double b : out.b_values) take(b);
  if (cusp_root && u_vanishes_at_zero) take(*cusp_root);
  for (double a : out.a_roots) take(a);
  if (cusp_root) out.a_roots.insert(out.a_roots.begin(), *cusp_root);
  out.cusp_form = u_vanishes_at_zero || (cusp_root && !out.q_roots.empty() && out.q_roots.front() == *cusp_root);

  out.inner = petersson_inner(make_operand(e), make_q_operand(u, j, out.q_roots), g, spec);
  out.residual = std::abs(out.inner.value) / out.inner.abs_integral;
  return out;
}

inline OrthogonalityReport orthogonality_replay(const GroupSpec& g, int k, QuadratureSpec spec = {}) {
  VerifyContext ctx(g, k);
  return orthogonality_replay(ctx, k, spec);
}

inline nlohmann::json to_json(const PeterssonResult& r) {
  return {{"re", r.value.real()},      {"im", r.value.imag()}, {"error_estimate", r.error_estimate},
          {"abs_integral", r.abs_integral}, {"nodes_per_cell", r.nodes_per_cell}, {"y_max", r.y_max},
          {"v_max", r.v_max}};
}

inline nlohmann::json to_json(const OrthogonalityReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"group", r.group},
          {"weight", r.weight},
          {"dim", r.dim},
          {"b_values", r.b_values},
          {"a_roots", r.a_roots},
          {"q_roots", r.q_roots},
          {"dropped_factors", r.dropped_factors},
          {"cusp_form", r.cusp_form},
          {"inner", to_json(r.inner)},
          {"residual", r.residual}};
}

}  // namespace eisenzero
