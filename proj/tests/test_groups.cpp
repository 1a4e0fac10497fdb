#include <gtest/gtest.h>

#include "eisenzero/groups.hpp"

using namespace eisenzero;

namespace {

nlohmann::json builtin_doc(const std::string& name) { return nlohmann::json::parse(builtin_group_config(name)); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(GroupSpec, Sl2zBuiltin) {
  auto g = group_spec("sl2z");
  EXPECT_EQ(g.cusp_width, 1);
  EXPECT_EQ(g.nu_inf, 1);
  EXPECT_EQ(g.level, 1);
  EXPECT_EQ(g.y0, QuadraticSurd(0, make_rational(1, 2), 3));
  ASSERT_EQ(g.arcs.size(), 1u);
  EXPECT_EQ(g.arcs[0].center_x, 0);
  EXPECT_EQ(g.arcs[0].radius, 1);
  auto classes = g.elliptic_classes();
  ASSERT_EQ(classes.size(), 2u);
  bool has_i = false, has_rho = false;
  for (const auto& p : g.elliptic_points) {
    if (p.order == 2 && p.x == QuadraticSurd(0) && p.y == QuadraticSurd(1)) has_i = true;
    if (p.order == 3 && p.x == QuadraticSurd(make_rational(-1, 2)) && p.y == QuadraticSurd(0, make_rational(1, 2), 3))
      has_rho = true;
  }
  EXPECT_TRUE(has_i);
  EXPECT_TRUE(has_rho);
}

TEST(GroupSpec, Gamma03Builtin) {
  auto g = group_spec("gamma0_3");
  EXPECT_EQ(g.cusp_width, 1);
  EXPECT_EQ(g.nu_inf, 2);
  EXPECT_EQ(g.level, 3);
  EXPECT_EQ(g.y0, QuadraticSurd(0, make_rational(1, 6), 3));
  auto classes = g.elliptic_classes();
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes.begin()->second, 3);
  ASSERT_EQ(g.elliptic_points.size(), 2u);
  for (const auto& p : g.elliptic_points) {
    EXPECT_EQ(abs(p.x.a), make_rational(1, 2));
    EXPECT_EQ(p.y, QuadraticSurd(0, make_rational(1, 6), 3));
  }
  ASSERT_EQ(g.arcs.size(), 2u);
  EXPECT_EQ(g.arcs[0].center_x, make_rational(-1, 3));
  EXPECT_EQ(g.arcs[1].center_x, make_rational(1, 3));
  EXPECT_EQ(g.arcs[0].radius, make_rational(1, 3));
}

TEST(GroupSpec, UnknownGroup) { EXPECT_EQ(code_of([] { group_spec("gamma0_5"); }), ErrorCode::UnknownGroup); }

TEST(GroupConfig, DeterminantTwoIdentificationRejected) {
  auto doc = builtin_doc("gamma0_3");
  doc["identifications"][0]["matrix"] = {{1, 1}, {3, 5}};
  try {
    parse_group_config(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigValidation);
    EXPECT_NE(std::string(e.what()).find("identifications[0].matrix"), std::string::npos) << e.what();
  }
}

TEST(GroupConfig, StructuralViolations) {
  auto unknown = builtin_doc("sl2z");
  unknown["genus"] = 0;
  EXPECT_EQ(code_of([&] { parse_group_config(unknown); }), ErrorCode::ConfigValidation);

  auto nested = builtin_doc("sl2z");
  nested["arcs"][0]["colour"] = "red";
  EXPECT_EQ(code_of([&] { parse_group_config(nested); }), ErrorCode::ConfigValidation);

  auto bad_order = builtin_doc("sl2z");
  bad_order["elliptic_points"][0]["order"] = 4;
  EXPECT_EQ(code_of([&] { parse_group_config(bad_order); }), ErrorCode::ConfigValidation);

  auto off_strip = builtin_doc("gamma0_3");
  off_strip["arcs"][0]["radius"] = "2/3";
  EXPECT_EQ(code_of([&] { parse_group_config(off_strip); }), ErrorCode::ConfigValidation);

  auto bad_level = builtin_doc("gamma0_3");
  bad_level["identifications"][0]["matrix"] = {{1, 0}, {2, 1}};
  EXPECT_EQ(code_of([&] { parse_group_config(bad_level); }), ErrorCode::ConfigValidation);

  auto bad_eta = builtin_doc("gamma0_3");
  bad_eta["generators"][3]["factors"] = {{1, 6}, {3, 5}};
  EXPECT_EQ(code_of([&] { parse_group_config(bad_eta); }), ErrorCode::ConfigValidation);

  auto quasi = builtin_doc("gamma0_3");
  quasi["generators"][0]["terms"] = {{3, 1}, {1, -1}};
  EXPECT_EQ(code_of([&] { parse_group_config(quasi); }), ErrorCode::ConfigValidation);

  EXPECT_EQ(code_of([] { parse_group_config(std::string("{not json")); }), ErrorCode::ConfigValidation);
}

TEST(GroupConfig, RoundTripOfBuiltinDocument) {
  auto g = parse_group_config(builtin_doc("gamma0_2"));
  EXPECT_EQ(g.level, 2);
  EXPECT_EQ(g.generators.size(), 4u);
  EXPECT_EQ(g.generators[3].weight, 8);
}

TEST(Dimension, Examples) {
  auto sl2z = group_spec("sl2z");
  auto g3 = group_spec("gamma0_3");
  EXPECT_EQ(dimension(sl2z, 6), 2);
  EXPECT_EQ(dimension(g3, 2), 2);
  EXPECT_EQ(dimension(sl2z, 1), 0);
  // Classical values: dim M_{2k}(SL2(Z)) = floor(k/6) (+1 unless k = 1 mod 6).
  for (int k = 1; k <= 40; ++k) {
    int want = k % 6 == 1 ? k / 6 : k / 6 + 1;
    EXPECT_EQ(dimension(sl2z, k), want) << k;
  }
  auto g2 = group_spec("gamma0_2");
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(dimension(g2, k), 1 + k / 2);
}

TEST(TrivialOrder, Examples) {
  auto sl2z = group_spec("sl2z");
  auto g3 = group_spec("gamma0_3");
  EXPECT_EQ(trivial_order(sl2z, 0, 3), 1);
  EXPECT_EQ(trivial_order(sl2z, 1, 3), 0);
  EXPECT_EQ(trivial_order(g3, 0, 2), 1);
  EXPECT_EQ(trivial_order(sl2z, 1, 2), 1);
  EXPECT_EQ(code_of([&] { trivial_order(g3, 7, 2); }), ErrorCode::UnknownEllipticClass);
}

TEST(ValenceCheck, Examples) {
  auto sl2z = group_spec("sl2z");
  EXPECT_TRUE(valence_check(sl2z, 6, {{"inf", 1, 1}}));
  EXPECT_TRUE(valence_check(sl2z, 2, {{"rho", 1, 3}}));
  EXPECT_FALSE(valence_check(sl2z, 2, {{"i", 1, 2}}));
  EXPECT_TRUE(valence_check(sl2z, 3, {{"i", 1, 2}}));
}

TEST(Geometry, EllipticPointsLieOnArcsExactly) {
  for (const char* name : {"gamma0_3", "gamma0_2", "sl2z"}) {
    auto g = group_spec(name);
    for (const auto& p : g.elliptic_points) {
      bool on_some_arc = false;
      for (const auto& a : g.arcs) {
        QuadraticSurd dx = p.x - QuadraticSurd(a.center_x);
        if (dx * dx + p.y * p.y == QuadraticSurd(a.radius * a.radius)) on_some_arc = true;
      }
      EXPECT_TRUE(on_some_arc) << name << " " << p.x.str() << " + i " << p.y.str();
    }
  }
  // |(-1/2 + i sqrt(3)/6) + 1/3| = 1/3
  QuadraticSurd x(make_rational(-1, 2) + make_rational(1, 3));
  QuadraticSurd y(0, make_rational(1, 6), 3);
  EXPECT_EQ(x * x + y * y, QuadraticSurd(make_rational(1, 9)));
}

TEST(Geometry, IdentificationsMapArcsOntoPairedArcs) {
  const Precision prec = 128;
  for (const char* name : {"sl2z", "gamma0_3", "gamma0_2"}) {
    auto g = group_spec(name);
    for (const auto& id : g.identifications) {
      const auto& src = g.arcs[static_cast<std::size_t>(id.source_arc)];
      const auto& dst = g.arcs[static_cast<std::size_t>(id.target_arc)];
      for (int s = 1; s < 32; ++s) {
        Rational t = src.t_start + (src.t_end - src.t_start) * make_rational(s, 32);
        Complex z = src.point(Real(t, prec));
        Complex w = id.apply(z);
        Real dist = abs(abs(w - Complex(Real(dst.center_x, prec), Real(prec))) - Real(dst.radius, prec));
        EXPECT_LT(dist.to_double(), 1e-12) << name;
        // The image is the mirror point -conj(z).
        EXPECT_LT(abs(w.re + z.re).to_double(), 1e-12);
        EXPECT_LT(abs(w.im - z.im).to_double(), 1e-12);
      }
    }
  }
}

TEST(QuadraticSurd, ExactSign) {
  EXPECT_EQ(QuadraticSurd(3, -6, 3).sign(), -1);  // 3 - 6 sqrt 3
  EXPECT_EQ(QuadraticSurd(-1, 1, 2).sign(), 1);
  EXPECT_EQ(QuadraticSurd(2, -1, 4).sign(), 0);
  EXPECT_NEAR(QuadraticSurd(3, -6, 3).to_double(), 3 - 6 * std::sqrt(3.0), 1e-14);
}
