#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisenzero/eta.hpp"
#include "eisenzero/rational.hpp"
#include "eisenzero/real.hpp"
#include "eisenzero/surd.hpp"

namespace eisenzero {

enum class Orientation { ccw, cw };

/// Circular arc z(t) = center_x + radius e^{i pi t}, t running from t_start
/// to t_end. Angles are stored in units of pi.
struct ArcSpec {
  Rational center_x;
  Rational radius;
  Rational t_start;
  Rational t_end;
  Orientation orientation = Orientation::cw;

  Complex point(const Real& t_pi) const {
    Precision prec = t_pi.precision();
    Complex e = expi(t_pi * Real::pi(prec));
    Real r(radius, prec);
    return Complex(Real(center_x, prec) + r * e.re, r * e.im);
  }
  /// dz/dt with t in radians.
  Complex derivative(const Real& t_pi) const {
    Precision prec = t_pi.precision();
    Complex e = expi(t_pi * Real::pi(prec));
    Real r(radius, prec);
    return Complex(-(r * e.im), r * e.re);
  }
  std::complex<double> point(double t_pi) const {
    return std::complex<double>(center_x.get_d(), 0.0) + radius.get_d() * std::polar(1.0, M_PI * t_pi);
  }
  /// True when the circle passes through the real axis at its endpoint
  /// parameter (a cusp of the domain).
  bool touches_real_axis_at(const Rational& t) const { return t == 0 || t == 1; }
};

struct EllipticPoint {
  QuadraticSurd x;
  QuadraticSurd y;
  int order = 2;
  int class_id = 0;
};

/// Recipe for one weight-tagged generator:
///   eisenstein: sum_delta a_delta E_w(delta z) (level-one E_w; w = 2 uses the
///               quasi-modular E_2 and requires sum a_delta / delta = 0),
///   eta:        prod eta(delta z)^{r_delta},
///   klein_j:    E_4^3 / Delta (weight 0, level one).
struct GeneratorSpec {
  enum class Kind { eisenstein, eta, klein_j };
  Kind kind = Kind::eisenstein;
  int weight = 0;
  std::vector<std::pair<int, Rational>> terms;
  EtaQuotientSpec eta;
};

struct HauptmodulRecipe {
  GeneratorSpec recipe;
  Rational constant;
  /// Coefficients of q^1, q^2, ... as printed in a reference, compared (never
  /// substituted) against the computed series.
  std::vector<Rational> reference_coefficients;
  std::optional<Rational> reference_corner_value;
};

struct Identification {
  std::array<long, 4> m{1, 0, 0, 1};  // (a b; c d)
  int source_arc = 0;
  int target_arc = 0;

  Complex apply(const Complex& z) const {
    Precision prec = z.precision();
    Complex num = z * Real(m[0], prec);
    num.re += Real(m[1], prec);
    Complex den = z * Real(m[2], prec);
    den.re += Real(m[3], prec);
    return num / den;
  }
};

struct GroupSpec {
  std::string name;
  int cusp_width = 1;
  int nu_inf = 1;
  int level = 1;
  std::vector<EllipticPoint> elliptic_points;
  QuadraticSurd y0;
  std::vector<ArcSpec> arcs;
  std::vector<GeneratorSpec> generators;
  HauptmodulRecipe hauptmodul;
  std::vector<Identification> identifications;

  /// Elliptic class id -> order.
  std::map<int, int> elliptic_classes() const {
    std::map<int, int> out;
    for (const auto& p : elliptic_points) out.emplace(p.class_id, p.order);
    return out;
  }
  bool has_cusp_zero() const { return level > 1; }
};

// ---------------------------------------------------------------------------
// Config parsing and validation

namespace detail {

using json = nlohmann::json;

struct Diagnostics {
  std::vector<std::string> items;
  void add(const std::string& field, const std::string& msg) { items.push_back(field + ": " + msg); }
  void raise_if_any() const {
    if (items.empty()) return;
    std::string all;
    for (const auto& s : items) all += (all.empty() ? "" : "; ") + s;
    throw Error(ErrorCode::ConfigValidation, all);
  }
};

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where,
                           Diagnostics& diag) {
  if (!obj.is_object()) {
    diag.add(where, "expected an object");
    return;
  }
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) diag.add(where + "." + it.key(), "unknown field");
}

inline std::optional<Rational> read_rational(const json& v, const std::string& where, Diagnostics& diag) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const Error&) {
  }
  diag.add(where, "expected a rational (integer or \"p/q\" string)");
  return std::nullopt;
}

inline std::optional<QuadraticSurd> read_surd(const json& v, const std::string& where, Diagnostics& diag) {
  if (!v.is_object()) {
    auto r = read_rational(v, where, diag);
    if (!r) return std::nullopt;
    return QuadraticSurd(*r);
  }
  reject_unknown(v, {"rational", "surd", "radicand"}, where, diag);
  Rational a = 0, b = 0;
  long d = 1;
  if (v.contains("rational")) {
    if (auto r = read_rational(v["rational"], where + ".rational", diag)) a = *r;
  }
  if (v.contains("surd")) {
    if (auto r = read_rational(v["surd"], where + ".surd", diag)) b = *r;
  }
  if (v.contains("radicand")) {
    if (!v["radicand"].is_number_integer() || v["radicand"].get<long>() <= 0) {
      diag.add(where + ".radicand", "expected a positive integer");
      return std::nullopt;
    }
    d = v["radicand"].get<long>();
  }
  return QuadraticSurd(a, b, d);
}

inline std::optional<int> read_int(const json& obj, const char* key, const std::string& where, Diagnostics& diag) {
  if (!obj.is_object() || !obj.contains(key)) {
    diag.add(where + "." + key, "missing");
    return std::nullopt;
  }
  if (!obj[key].is_number_integer()) {
    diag.add(where + "." + key, "expected an integer");
    return std::nullopt;
  }
  return obj[key].get<int>();
}

inline std::optional<GeneratorSpec> read_generator(const json& v, const std::string& where, Diagnostics& diag) {
  if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string()) {
    diag.add(where + ".kind", "expected \"eisenstein\", \"eta\" or \"klein_j\"");
    return std::nullopt;
  }
  GeneratorSpec g;
  std::string kind = v["kind"].get<std::string>();
  if (kind == "eisenstein") {
    reject_unknown(v, {"kind", "weight", "terms"}, where, diag);
    auto w = read_int(v, "weight", where, diag);
    if (!w) return std::nullopt;
    g.kind = GeneratorSpec::Kind::eisenstein;
    g.weight = *w;
    if (!v.contains("terms") || !v["terms"].is_array() || v["terms"].empty()) {
      diag.add(where + ".terms", "expected a nonempty array of [scale, coefficient]");
      return std::nullopt;
    }
    for (std::size_t i = 0; i < v["terms"].size(); ++i) {
      const auto& t = v["terms"][i];
      std::string at = where + ".terms[" + std::to_string(i) + "]";
      if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer()) {
        diag.add(at, "expected [scale, coefficient]");
        continue;
      }
      auto c = read_rational(t[1], at, diag);
      if (c) g.terms.emplace_back(t[0].get<int>(), *c);
    }
  } else if (kind == "eta") {
    reject_unknown(v, {"kind", "factors"}, where, diag);
    g.kind = GeneratorSpec::Kind::eta;
    if (!v.contains("factors") || !v["factors"].is_array() || v["factors"].empty()) {
      diag.add(where + ".factors", "expected a nonempty array of [scale, exponent]");
      return std::nullopt;
    }
    for (std::size_t i = 0; i < v["factors"].size(); ++i) {
      const auto& t = v["factors"][i];
      if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer()) {
        diag.add(where + ".factors[" + std::to_string(i) + "]", "expected [scale, exponent]");
        continue;
      }
      g.eta.factors.push_back({t[0].get<int>(), t[1].get<int>()});
    }
    long tw = g.eta.twice_weight();
    if (tw % 2 != 0) diag.add(where + ".factors", "odd total exponent gives half-integral weight");
    g.weight = static_cast<int>(tw / 2);
  } else if (kind == "klein_j") {
    reject_unknown(v, {"kind"}, where, diag);
    g.kind = GeneratorSpec::Kind::klein_j;
    g.weight = 0;
  } else {
    diag.add(where + ".kind", "unknown generator kind '" + kind + "'");
    return std::nullopt;
  }
  return g;
}

inline void check_generator(const GeneratorSpec& g, const std::string& where, Diagnostics& diag) {
  if (g.kind == GeneratorSpec::Kind::klein_j) return;
  if (g.kind == GeneratorSpec::Kind::eta) {
    for (const auto& f : g.eta.factors)
      if (f.scale <= 0) diag.add(where, "eta scale must be positive");
    if (g.eta.scaled_order_24() % 24 != 0) diag.add(where, "sum delta*r_delta is not divisible by 24");
    return;
  }
  if (g.weight < 2 || g.weight % 2 != 0) diag.add(where + ".weight", "Eisenstein weight must be even and >= 2");
  Rational defect = 0;
  for (const auto& [delta, a] : g.terms) {
    if (delta <= 0) diag.add(where + ".terms", "scale must be positive");
    else defect += a / delta;
  }
  if (g.weight == 2 && defect != 0)
    diag.add(where + ".terms", "weight-2 combination must satisfy sum a/delta = 0");
}

inline int recipe_level(const GeneratorSpec& g) {
  int level = 1;
  if (g.kind == GeneratorSpec::Kind::eta) {
    for (const auto& f : g.eta.factors)
      if (f.scale > 0) level = std::lcm(level, f.scale);
  } else {
    for (const auto& t : g.terms)
      if (t.first > 0) level = std::lcm(level, t.first);
  }
  return level;
}

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

/// Geometric checks that need the whole spec.
inline void check_geometry(const GroupSpec& g, Diagnostics& diag) {
  const double half = g.cusp_width / 2.0;
  const double y0 = g.y0.to_double();
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    const auto& a = g.arcs[i];
    std::string where = "arcs[" + std::to_string(i) + "]";
    if (a.radius <= 0) {
      diag.add(where + ".radius", "must be positive");
      continue;
    }
    Rational lo = std::min(a.t_start, a.t_end), hi = std::max(a.t_start, a.t_end);
    if (lo < 0 || hi > 1 || lo == hi) diag.add(where, "parameter range must lie in [0, 1] (units of pi) and be nonempty");
    if ((a.orientation == Orientation::cw) != (a.t_end < a.t_start))
      diag.add(where + ".orientation", "does not match the direction from t_start to t_end");
    for (int s = 0; s <= 16; ++s) {
      double t = lo.get_d() + Rational(hi - lo).get_d() * s / 16.0;
      if (std::abs(a.point(t).real()) > half + 1e-12) diag.add(where, "leaves the strip |Re z| <= h/2");
    }
    // Each endpoint is a neighbouring arc's endpoint, a foot of a vertical side,
    // or a boundary cusp on the real axis.
    for (const Rational& t : {a.t_start, a.t_end}) {
      auto p = a.point(t.get_d());
      bool ok = std::abs(p.imag()) < 1e-12 ||
                (std::abs(std::abs(p.real()) - half) < 1e-12 && std::abs(p.imag() - y0) < 1e-12);
      for (std::size_t j = 0; j < g.arcs.size() && !ok; ++j) {
        if (j == i) continue;
        for (const Rational& u : {g.arcs[j].t_start, g.arcs[j].t_end})
          if (std::abs(g.arcs[j].point(u.get_d()) - p) < 1e-12) ok = true;
      }
      if (!ok) diag.add(where, "endpoint matches no neighbouring arc, vertical-side foot, or cusp");
    }
  }
  for (std::size_t i = 0; i < g.identifications.size(); ++i) {
    const auto& id = g.identifications[i];
    std::string where = "identifications[" + std::to_string(i) + "]";
    long det = id.m[0] * id.m[3] - id.m[1] * id.m[2];
    if (det != 1) diag.add(where + ".matrix", "determinant " + std::to_string(det) + " is not 1");
    if (id.m[2] % g.level != 0)
      diag.add(where + ".matrix", "lower-left entry is not divisible by the level " + std::to_string(g.level));
    if (id.source_arc < 0 || id.source_arc >= static_cast<int>(g.arcs.size()) || id.target_arc < 0 ||
        id.target_arc >= static_cast<int>(g.arcs.size()))
      diag.add(where, "arc index out of range");
  }
  for (std::size_t i = 0; i < g.elliptic_points.size(); ++i) {
    const auto& e = g.elliptic_points[i];
    std::string where = "elliptic_points[" + std::to_string(i) + "]";
    if (e.order != 2 && e.order != 3) diag.add(where + ".order", "must be 2 or 3");
    if (e.y.sign() <= 0) diag.add(where + ".y", "must be positive");
  }
}

}  // namespace detail

/// Validates and builds a GroupSpec from a config document. Every problem is
/// collected and reported in one ConfigValidation error.
inline GroupSpec parse_group_config(const nlohmann::json& doc) {
  using detail::json;
  detail::Diagnostics diag;
  detail::reject_unknown(doc, {"name", "cusp_width", "nu_inf", "elliptic_points", "y0", "arcs", "generators",
                               "hauptmodul", "identifications"},
                         "config", diag);
  diag.raise_if_any();
  GroupSpec g;
  if (doc.contains("name") && doc["name"].is_string() && !doc["name"].get<std::string>().empty())
    g.name = doc["name"].get<std::string>();
  else
    diag.add("name", "expected a nonempty string");
  if (auto w = detail::read_int(doc, "cusp_width", "config", diag)) {
    if (*w <= 0) diag.add("cusp_width", "must be positive");
    g.cusp_width = *w;
  }
  if (auto n = detail::read_int(doc, "nu_inf", "config", diag)) {
    if (*n <= 0) diag.add("nu_inf", "must be positive");
    g.nu_inf = *n;
  }
  if (!doc.contains("y0")) {
    diag.add("y0", "missing");
  } else if (auto y = detail::read_surd(doc["y0"], "y0", diag)) {
    if (y->sign() <= 0) diag.add("y0", "must be positive");
    g.y0 = *y;
  }

  auto array_field = [&](const char* key) -> const json* {
    if (!doc.contains(key) || !doc[key].is_array()) {
      diag.add(key, "expected an array");
      return nullptr;
    }
    return &doc[key];
  };

  if (const json* pts = array_field("elliptic_points")) {
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const auto& p = (*pts)[i];
      std::string where = "elliptic_points[" + std::to_string(i) + "]";
      detail::reject_unknown(p, {"x", "y", "order", "class"}, where, diag);
      if (!p.is_object()) continue;
      EllipticPoint e;
      if (!p.contains("x") || !p.contains("y")) {
        diag.add(where, "needs x and y");
        continue;
      }
      auto x = detail::read_surd(p["x"], where + ".x", diag);
      auto y = detail::read_surd(p["y"], where + ".y", diag);
      auto order = detail::read_int(p, "order", where, diag);
      auto cls = detail::read_int(p, "class", where, diag);
      if (!x || !y || !order || !cls) continue;
      e.x = *x;
      e.y = *y;
      e.order = *order;
      e.class_id = *cls;
      g.elliptic_points.push_back(e);
    }
  }
  if (const json* arcs = array_field("arcs")) {
    for (std::size_t i = 0; i < arcs->size(); ++i) {
      const auto& a = (*arcs)[i];
      std::string where = "arcs[" + std::to_string(i) + "]";
      detail::reject_unknown(a, {"kind", "center_x", "radius", "t_start", "t_end", "orientation"}, where, diag);
      if (!a.is_object()) continue;
      if (a.contains("kind") && a["kind"] != "circle") diag.add(where + ".kind", "only \"circle\" is supported");
      ArcSpec arc;
      bool ok = true;
      for (auto [key, slot] : {std::pair<const char*, Rational*>{"center_x", &arc.center_x}, {"radius", &arc.radius},
                               {"t_start", &arc.t_start}, {"t_end", &arc.t_end}}) {
        if (!a.contains(key)) {
          diag.add(where + "." + key, "missing");
          ok = false;
          continue;
        }
        auto r = detail::read_rational(a[key], where + "." + key, diag);
        if (r) *slot = *r;
        else ok = false;
      }
      if (!a.contains("orientation") || !a["orientation"].is_string() ||
          (a["orientation"] != "cw" && a["orientation"] != "ccw")) {
        diag.add(where + ".orientation", "expected \"cw\" or \"ccw\"");
        ok = false;
      } else {
        arc.orientation = a["orientation"] == "cw" ? Orientation::cw : Orientation::ccw;
      }
      if (ok) g.arcs.push_back(arc);
    }
  }
  if (const json* gens = array_field("generators")) {
    for (std::size_t i = 0; i < gens->size(); ++i) {
      std::string where = "generators[" + std::to_string(i) + "]";
      if (auto gen = detail::read_generator((*gens)[i], where, diag)) {
        detail::check_generator(*gen, where, diag);
        if (gen->weight <= 0) diag.add(where, "generator weight must be positive");
        g.generators.push_back(*gen);
      }
    }
  }
  if (!doc.contains("hauptmodul") || !doc["hauptmodul"].is_object()) {
    diag.add("hauptmodul", "expected an object");
  } else {
    const auto& h = doc["hauptmodul"];
    detail::reject_unknown(h, {"recipe", "constant", "reference_coefficients", "reference_corner_value"}, "hauptmodul",
                           diag);
    if (!h.contains("recipe")) {
      diag.add("hauptmodul.recipe", "missing");
    } else if (auto rec = detail::read_generator(h["recipe"], "hauptmodul.recipe", diag)) {
      detail::check_generator(*rec, "hauptmodul.recipe", diag);
      if (rec->weight != 0) diag.add("hauptmodul.recipe", "hauptmodul recipe must have weight 0");
      g.hauptmodul.recipe = *rec;
    }
    if (h.contains("constant")) {
      if (auto c = detail::read_rational(h["constant"], "hauptmodul.constant", diag)) g.hauptmodul.constant = *c;
    }
    if (h.contains("reference_coefficients")) {
      if (!h["reference_coefficients"].is_array()) diag.add("hauptmodul.reference_coefficients", "expected an array");
      else
        for (std::size_t i = 0; i < h["reference_coefficients"].size(); ++i)
          if (auto c = detail::read_rational(h["reference_coefficients"][i],
                                             "hauptmodul.reference_coefficients[" + std::to_string(i) + "]", diag))
            g.hauptmodul.reference_coefficients.push_back(*c);
    }
    if (h.contains("reference_corner_value")) {
      if (auto c = detail::read_rational(h["reference_corner_value"], "hauptmodul.reference_corner_value", diag))
        g.hauptmodul.reference_corner_value = *c;
    }
  }
  if (const json* ids = array_field("identifications")) {
    for (std::size_t i = 0; i < ids->size(); ++i) {
      const auto& v = (*ids)[i];
      std::string where = "identifications[" + std::to_string(i) + "]";
      detail::reject_unknown(v, {"matrix", "source_arc", "target_arc"}, where, diag);
      if (!v.is_object()) continue;
      Identification id;
      const auto& m = v.contains("matrix") ? v["matrix"] : json();
      bool ok = m.is_array() && m.size() == 2 && m[0].is_array() && m[1].is_array() && m[0].size() == 2 &&
                m[1].size() == 2;
      if (ok)
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) ok = ok && m[r][c].is_number_integer();
      if (!ok) {
        diag.add(where + ".matrix", "expected a 2x2 integer matrix");
        continue;
      }
      id.m = {m[0][0].get<long>(), m[0][1].get<long>(), m[1][0].get<long>(), m[1][1].get<long>()};
      auto s = detail::read_int(v, "source_arc", where, diag);
      auto t = detail::read_int(v, "target_arc", where, diag);
      if (!s || !t) continue;
      id.source_arc = *s;
      id.target_arc = *t;
      g.identifications.push_back(id);
    }
  }
  diag.raise_if_any();

  g.level = detail::recipe_level(g.hauptmodul.recipe);
  for (const auto& gen : g.generators) g.level = std::lcm(g.level, detail::recipe_level(gen));
  if (g.level > 1 && !detail::is_prime(g.level))
    diag.add("generators", "composite level " + std::to_string(g.level) + " is not supported");
  if (g.cusp_width != 1) diag.add("cusp_width", "recipes expand in q = exp(2 pi i z), so the width at infinity must be 1");
  if (g.level == 1 && g.nu_inf != 1) diag.add("nu_inf", "level one has a single cusp");
  if (g.level > 1 && g.nu_inf != 2) diag.add("nu_inf", "prime level has exactly two cusps");
  detail::check_geometry(g, diag);
  diag.raise_if_any();
  return g;
}

inline GroupSpec parse_group_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigValidation, std::string("config: malformed JSON: ") + e.what());
  }
  return parse_group_config(doc);
}

namespace detail {

inline const char* kBuiltinSl2z = R"({
  "name": "sl2z",
  "cusp_width": 1,
  "nu_inf": 1,
  "elliptic_points": [
    {"x": 0, "y": 1, "order": 2, "class": 0},
    {"x": "-1/2", "y": {"surd": "1/2", "radicand": 3}, "order": 3, "class": 1},
    {"x": "1/2", "y": {"surd": "1/2", "radicand": 3}, "order": 3, "class": 1}
  ],
  "y0": {"surd": "1/2", "radicand": 3},
  "arcs": [
    {"kind": "circle", "center_x": 0, "radius": 1, "t_start": "2/3", "t_end": "1/3", "orientation": "cw"}
  ],
  "generators": [
    {"kind": "eisenstein", "weight": 4, "terms": [[1, 1]]},
    {"kind": "eisenstein", "weight": 6, "terms": [[1, 1]]}
  ],
  "hauptmodul": {"recipe": {"kind": "klein_j"}, "constant": -744},
  "identifications": [
    {"matrix": [[0, -1], [1, 0]], "source_arc": 0, "target_arc": 0}
  ]
})";

inline const char* kBuiltinGamma02 = R"({
  "name": "gamma0_2",
  "cusp_width": 1,
  "nu_inf": 2,
  "elliptic_points": [
    {"x": "-1/2", "y": "1/2", "order": 2, "class": 0},
    {"x": "1/2", "y": "1/2", "order": 2, "class": 0}
  ],
  "y0": "1/2",
  "arcs": [
    {"kind": "circle", "center_x": "-1/2", "radius": "1/2", "t_start": "1/2", "t_end": 0, "orientation": "cw"},
    {"kind": "circle", "center_x": "1/2", "radius": "1/2", "t_start": 1, "t_end": "1/2", "orientation": "cw"}
  ],
  "generators": [
    {"kind": "eisenstein", "weight": 2, "terms": [[2, 2], [1, -1]]},
    {"kind": "eisenstein", "weight": 4, "terms": [[1, 1]]},
    {"kind": "eisenstein", "weight": 4, "terms": [[2, 1]]},
    {"kind": "eta", "factors": [[1, 8], [2, 8]]}
  ],
  "hauptmodul": {"recipe": {"kind": "eta", "factors": [[1, 24], [2, -24]]}, "constant": 24},
  "identifications": [
    {"matrix": [[1, 0], [2, 1]], "source_arc": 0, "target_arc": 1},
    {"matrix": [[1, 0], [-2, 1]], "source_arc": 1, "target_arc": 0}
  ]
})";

inline const char* kBuiltinGamma03 = R"({
  "name": "gamma0_3",
  "cusp_width": 1,
  "nu_inf": 2,
  "elliptic_points": [
    {"x": "-1/2", "y": {"surd": "1/6", "radicand": 3}, "order": 3, "class": 0},
    {"x": "1/2", "y": {"surd": "1/6", "radicand": 3}, "order": 3, "class": 0}
  ],
  "y0": {"surd": "1/6", "radicand": 3},
  "arcs": [
    {"kind": "circle", "center_x": "-1/3", "radius": "1/3", "t_start": "2/3", "t_end": 0, "orientation": "cw"},
    {"kind": "circle", "center_x": "1/3", "radius": "1/3", "t_start": 1, "t_end": "1/3", "orientation": "cw"}
  ],
  "generators": [
    {"kind": "eisenstein", "weight": 2, "terms": [[3, "3/2"], [1, "-1/2"]]},
    {"kind": "eisenstein", "weight": 4, "terms": [[1, 1]]},
    {"kind": "eisenstein", "weight": 4, "terms": [[3, 1]]},
    {"kind": "eta", "factors": [[1, 6], [3, 6]]}
  ],
  "hauptmodul": {
    "recipe": {"kind": "eta", "factors": [[1, 12], [3, -12]]},
    "constant": 12,
    "reference_coefficients": [783, 8672, 65367, 371520],
    "reference_corner_value": -42
  },
  "identifications": [
    {"matrix": [[1, 0], [3, 1]], "source_arc": 0, "target_arc": 1},
    {"matrix": [[1, 0], [-3, 1]], "source_arc": 1, "target_arc": 0}
  ]
})";

}  // namespace detail

inline std::vector<std::string> builtin_group_names() { return {"sl2z", "gamma0_2", "gamma0_3"}; }

inline std::string builtin_group_config(const std::string& name) {
  if (name == "sl2z") return detail::kBuiltinSl2z;
  if (name == "gamma0_2") return detail::kBuiltinGamma02;
  if (name == "gamma0_3") return detail::kBuiltinGamma03;
  throw Error(ErrorCode::UnknownGroup, "no builtin group named '" + name + "'");
}

inline GroupSpec group_spec(const std::string& name) { return parse_group_config(builtin_group_config(name)); }

// ---------------------------------------------------------------------------
// Dimension and valence bookkeeping

/// dim M_{2k}: 1 - 2k + nu_inf k + sum over elliptic classes floor(k (1 - 1/e)).
inline int dimension(const GroupSpec& g, int k) {
  if (k < 0) return 0;
  int d = 1 - 2 * k + g.nu_inf * k;
  for (const auto& [cls, e] : g.elliptic_classes()) d += (k * (e - 1)) / e;
  return std::max(d, 0);
}

/// e * frac(k (1 - 1/e)): the forced vanishing order at the class.
inline int trivial_order(const GroupSpec& g, int class_id, int k) {
  auto classes = g.elliptic_classes();
  auto it = classes.find(class_id);
  if (it == classes.end())
    throw Error(ErrorCode::UnknownEllipticClass, "group " + g.name + " has no elliptic class " + std::to_string(class_id));
  int e = it->second;
  return ((k * (e - 1)) % e + e) % e;
}

struct DivisorEntry {
  std::string location;  // "inf", "0", "elliptic:<class>", or a free label
  int order = 0;
  int stabilizer_order = 1;
};

/// sum ord/e over the divisor minus sum over elliptic classes k (1 - 1/e)
/// must equal -2k + nu_inf k.
inline bool valence_check(const GroupSpec& g, int k, const std::vector<DivisorEntry>& divisor) {
  Rational lhs = 0;
  for (const auto& d : divisor) {
    if (d.order < 0 || d.stabilizer_order <= 0) return false;
    lhs += make_rational(d.order, d.stabilizer_order);
  }
  for (const auto& [cls, e] : g.elliptic_classes()) lhs -= make_rational(static_cast<long>(k) * (e - 1), e);
  return lhs == Rational(-2 * k + g.nu_inf * k);
}

}  // namespace eisenzero
