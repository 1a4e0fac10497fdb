#include <gtest/gtest.h>

#include <sstream>

#include "eisenzero/geometry.hpp"

using namespace eisenzero;

namespace {

const Precision kPrec = 128;

double dist(const Complex& a, double x, double y) { return std::hypot(a.re.to_double() - x, a.im.to_double() - y); }

/// Sampled j values never reverse direction between cuts. Consecutive
/// samples may agree only where j has already reached the cusp value to the
/// working precision.
void expect_monotone(const std::vector<TraceSample>& s, const std::vector<double>& cuts, const JField& j) {
  int dir = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (double c : cuts)
      if ((s[i - 1].t.to_double() - c) * (s[i].t.to_double() - c) <= 0) dir = 0;
    int step = (s[i].j.re - s[i - 1].j.re).sign();
    if (step == 0) {
      ASSERT_TRUE(j.cusp_zero_value());
      EXPECT_LT(std::abs(s[i].j.re.to_double() - j.cusp_zero_value()->get_d()), 1e-25) << i;
      continue;
    }
    if (dir != 0) EXPECT_EQ(step, dir) << i;
    dir = step;
  }
}

}  // namespace

TEST(Trace, JIsRealOnTheBoundary) {
  for (const char* name : {"sl2z", "gamma0_3", "gamma0_2"}) {
    auto g = group_spec(name);
    JField j(g, kPrec);
    auto tr = trace_boundary(g, j);
    EXPECT_LT(tr.max_abs_im_j.to_double(), 1e-9) << name;
    ASSERT_EQ(tr.pieces.size(), g.arcs.size() + 1);
    for (const auto& p : tr.pieces) EXPECT_GE(p.samples.size(), 64u);
    // On the vertical line q is real, so every partial sum is real.
    for (const auto& s : tr.pieces[0].samples) EXPECT_LT(abs(s.j.im).to_double(), 1e-25 * std::max(1.0, abs(s.j.re).to_double()));
  }
}

TEST(Trace, CuspAdjacentSamplesAreSkipped) {
  auto g = group_spec("gamma0_3");
  JField j(g, kPrec);
  auto tr = trace_boundary(g, j);
  EXPECT_GT(tr.skipped_near_cusp, 0);
  auto s = trace_boundary(group_spec("sl2z"), JField(group_spec("sl2z"), kPrec));
  EXPECT_EQ(s.skipped_near_cusp, 0);
}

TEST(Trace, DerivativeMatchesFiniteDifferences) {
  for (const char* name : {"sl2z", "gamma0_3"}) {
    auto g = group_spec(name);
    JField j(g, kPrec);
    for (const auto& arc : g.arcs) {
      for (double f : {0.2, 0.45, 0.7}) {
        Rational t = arc.t_start + (arc.t_end - arc.t_start) * Rational(f);
        Real tr(t, kPrec), h(1e-15, kPrec);
        Complex jp = j.value(arc.point(tr + h)), jm = j.value(arc.point(tr - h));
        Real fd = (jp.re - jm.re) / (h * 2L);
        TraceSample s = detail::arc_sample(j, arc, tr);
        EXPECT_NEAR(s.dj.re.to_double(), fd.to_double(), 1e-9 * std::max(1.0, std::abs(fd.to_double()))) << name;
        EXPECT_LT(abs(s.dj.im).to_double(), 1e-20 * std::max(1.0, std::abs(fd.to_double())));
      }
    }
  }
}

TEST(Trace, CsvHasOneRowPerSample) {
  auto g = group_spec("sl2z");
  JField j(g, kPrec);
  auto tr = trace_boundary(g, j);
  std::ostringstream os;
  write_trace_csv(os, tr);
  std::size_t rows = 0;
  for (const auto& p : tr.pieces) rows += p.samples.size();
  const std::string csv = os.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rows + 1);
  EXPECT_EQ(csv.rfind("piece,t,x,y,re_j,im_j,y_prime,re_dj,im_dj", 0), 0u);
}

TEST(Trace, TooFewSamplesRejected) {
  auto g = group_spec("sl2z");
  GeometryOptions o;
  o.samples_per_arc = 10;
  EXPECT_THROW(trace_boundary(g, JField(g, kPrec), o), Error);
}

TEST(Crit, Sl2zHasNoSignChange) {
  auto g = group_spec("sl2z");
  JField j(g, kPrec);
  auto cs = crit_and_c(g, j);
  EXPECT_EQ(cs.c_value, 0);
  // The only crit point is i, where both derivatives vanish.
  ASSERT_EQ(cs.points.size(), 1u);
  EXPECT_LT(dist(cs.points[0].z, 0, 1), 1e-12);
  EXPECT_FALSE(cs.points[0].sign_change);
  EXPECT_TRUE(cs.points[0].numerator_zero);
  EXPECT_TRUE(cs.points[0].denominator_zero);
}

TEST(Crit, Gamma03HasOneClassAtTheApex) {
  auto g = group_spec("gamma0_3");
  JField j(g, kPrec);
  auto cs = crit_and_c(g, j);
  EXPECT_EQ(cs.c_value, 1);
  EXPECT_TRUE(cs.classes_consistent);
  EXPECT_EQ(cs.unmatched_images, 0);
  ASSERT_EQ(cs.points.size(), 2u);
  EXPECT_EQ(cs.points[0].class_id, cs.points[1].class_id);
  bool left = false, right = false;
  for (const auto& p : cs.points) {
    EXPECT_TRUE(p.sign_change);
    EXPECT_EQ(p.kind, CritKind::zero);
    if (dist(p.z, -1.0 / 3, 1.0 / 3) < 1e-10) left = true;
    if (dist(p.z, 1.0 / 3, 1.0 / 3) < 1e-10) right = true;
  }
  EXPECT_TRUE(left);
  EXPECT_TRUE(right);
}

TEST(Crit, StableUnderSampleDoubling) {
  for (const char* name : {"sl2z", "gamma0_3", "gamma0_2"}) {
    auto g = group_spec(name);
    JField j(g, kPrec);
    GeometryOptions o;
    int base = crit_and_c(g, j, o).c_value;
    o.samples_per_arc *= 2;
    EXPECT_EQ(crit_and_c(g, j, o).c_value, base) << name;
    o.samples_per_arc *= 2;
    EXPECT_EQ(crit_and_c(g, j, o).c_value, base) << name;
  }
}

TEST(Crit, MonotoneArcsGiveZero) {
  // On Gamma_0(2) the apex is the corner, so y is monotone inside each arc; j
  // is monotone on the samples too, hence no sign change.
  auto g = group_spec("gamma0_2");
  JField j(g, kPrec);
  auto tr = trace_boundary(g, j);
  for (std::size_t p = 1; p < tr.pieces.size(); ++p) expect_monotone(tr.pieces[p].samples, {}, j);
  EXPECT_EQ(crit_and_c(g, j).c_value, 0);
}

TEST(Crit, MonotoneBetweenCritPoints) {
  for (const char* name : {"sl2z", "gamma0_3"}) {
    auto g = group_spec(name);
    JField j(g, kPrec);
    auto cs = crit_and_c(g, j);
    auto tr = trace_boundary(g, j);
    for (std::size_t p = 1; p < tr.pieces.size(); ++p) {
      int arc = tr.pieces[p].arc_id;
      std::vector<double> cuts;
      for (const auto& c : cs.points)
        if (c.arc_id == arc && c.denominator_zero) cuts.push_back(c.t.to_double());
      expect_monotone(tr.pieces[p].samples, cuts, j);
    }
  }
}

TEST(Values, CornerAndApex) {
  auto g3 = group_spec("gamma0_3");
  JField j3(g3, kPrec);
  EXPECT_NEAR(interval_endpoint(j3, g3).to_double(), -15.0, 1e-25);
  // Apex -1/3 + i/3
  Complex apex(Real(make_rational(-1, 3), kPrec), Real(make_rational(1, 3), kPrec));
  EXPECT_NEAR(j3.value(apex).re.to_double(), 3 - 6 * std::sqrt(3.0), 1e-12);
  auto g1 = group_spec("sl2z");
  JField j1(g1, kPrec);
  EXPECT_NEAR(interval_endpoint(j1, g1).to_double(), -744.0, 1e-25);
  ASSERT_TRUE(j3.cusp_zero_value());
  EXPECT_EQ(*j3.cusp_zero_value(), 12);
}

TEST(Invert, Sl2zKnownValues) {
  auto g = group_spec("sl2z");
  JField j(g, kPrec);
  auto cs = crit_and_c(g, j);
  auto i_pt = invert_j_on_boundary(g, j, cs, Real(984L, kPrec));
  EXPECT_LT(dist(i_pt.z, 0, 1), 1e-12);
  auto rho = invert_j_on_boundary(g, j, cs, Real(-744L, kPrec));
  EXPECT_LT(dist(rho.z, -0.5, std::sqrt(3.0) / 2), 1e-12);
  for (long target : {-1000L, -500L, 0L, 700L}) {
    auto b = invert_j_on_boundary(g, j, cs, Real(target, kPrec));
    EXPECT_LT(abs(j.value(b.z).re - Real(target, kPrec)).to_double(), 1e-20 * std::max(1.0, std::abs(double(target))));
    EXPECT_EQ(b.arc_id, target < -744 ? -1 : 0);
  }
  EXPECT_THROW(invert_j_on_boundary(g, j, cs, Real(1000L, kPrec)), Error);
}

TEST(Invert, Gamma03CornerAndCusp) {
  auto g = group_spec("gamma0_3");
  JField j(g, kPrec);
  auto cs = crit_and_c(g, j);
  auto corner = invert_j_on_boundary(g, j, cs, interval_endpoint(j, g));
  EXPECT_LT(dist(corner.z, -0.5, std::sqrt(3.0) / 6), 1e-12);
  auto cusp = invert_j_on_boundary(g, j, cs, Real(12L, kPrec));
  EXPECT_TRUE(cusp.at_cusp);
  EXPECT_LT(dist(cusp.z, 0, 0), 1e-30);
  for (long target : {-14L, -7L, 0L, 11L}) {
    auto b = invert_j_on_boundary(g, j, cs, Real(target, kPrec));
    EXPECT_LT(abs(j.value(b.z).re - Real(target, kPrec)).to_double(), 1e-20);
    EXPECT_EQ(b.arc_id, 0);
  }
  try {
    invert_j_on_boundary(g, j, cs, Real(50L, kPrec));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
}
