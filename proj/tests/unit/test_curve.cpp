#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rnshelix/curve.hpp"
#include "rnshelix/error.hpp"

using namespace rnshelix;

namespace {

CurveSpec space_curve(const char* a, const char* b, const char* c, double t0, double t1, int n = 1001) {
  CurveSpec spec;
  spec.form = CurveSpec::Form::Space;
  spec.x = {parse_expr(a), parse_expr(b), parse_expr(c)};
  spec.t0 = t0;
  spec.t1 = t1;
  spec.samples = n;
  return spec;
}

SurfaceSpec cylinder() {
  SurfaceSpec s;
  s.x = {parse_expr("u"), parse_expr("cos(v)"), parse_expr("sin(v)")};
  return s;
}

double max_speed_defect(const CurveTable& t, double target) {
  double m = 0.0;
  for (const auto& v : t.d1) m = std::max(m, std::abs(mdot(v, v) - target));
  return m;
}

}  // namespace

TEST(Curve, UnitSpeedCircleKeepsParameter) {
  const CurveTable t = reparametrize_unit_speed(space_curve("0", "cos(s)", "sin(s)", 0, 3), nullptr);
  ASSERT_EQ(t.size(), 1001u);
  EXPECT_EQ(t.velocity, Causal::Spacelike);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.s[i], t.t[i], 1e-8);
  EXPECT_LT(max_speed_defect(t, 1.0), 1e-8);
}

TEST(Curve, DoubledCircleHasDoubledWindow) {
  const CurveTable t =
      reparametrize_unit_speed(space_curve("0", "cos(2*s)", "sin(2*s)", 0, std::numbers::pi), nullptr);
  EXPECT_NEAR(t.s.front(), 0.0, 1e-15);
  EXPECT_NEAR(t.s.back(), 2 * std::numbers::pi, 1e-6);
  EXPECT_LT(max_speed_defect(t, 1.0), 1e-8);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.t[i], 0.5 * (t.s[i] - t.s.front()), 1e-7);
}

TEST(Curve, GenericSpeedIsNormalized) {
  const CurveTable t = reparametrize_unit_speed(space_curve("0", "s", "s^2 + s^3/3", -1, 1), nullptr);
  EXPECT_LT(max_speed_defect(t, 1.0), 1e-8);
  const double ds = t.s[1] - t.s[0];
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_NEAR(t.s[i] - t.s[i - 1], ds, 1e-9);
}

TEST(Curve, TimelikeCurveHasUnitTimelikeSpeed) {
  const CurveTable t = reparametrize_unit_speed(space_curve("2*sinh(s)", "2*cosh(s)", "0", 0, 1), nullptr);
  EXPECT_EQ(t.velocity, Causal::Timelike);
  EXPECT_LT(max_speed_defect(t, -1.0), 1e-8);
}

TEST(Curve, NullLineIsRejected) {
  try {
    reparametrize_unit_speed(space_curve("s", "s", "0", 0, 1), nullptr);
    FAIL() << "expected LightlikeVelocity";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LightlikeVelocity);
  }
}

TEST(Curve, MixedCharacterIsRejected) {
  try {
    reparametrize_unit_speed(space_curve("s^2", "s", "0", 0, 1), nullptr);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::MixedCausalCharacter || e.kind() == ErrorKind::LightlikeVelocity);
  }
}

TEST(Curve, CylinderNormal) {
  const SurfaceSpec s = cylinder();
  for (double v : {0.0, 0.7, 2.0, -1.3}) {
    const LVec3 n = s.unit_normal(0.3, v, 1e-4, 1e-9);
    EXPECT_NEAR(std::abs(n.x2 * std::cos(v) + n.x3 * std::sin(v)), 1.0, 1e-8);
    EXPECT_NEAR(n.x1, 0.0, 1e-12);
    EXPECT_NEAR(mdot(n, n), 1.0, 1e-8);
  }
}

TEST(Curve, DegenerateAndLightlikeNormals) {
  SurfaceSpec flat;
  flat.x = {parse_expr("u"), parse_expr("u"), parse_expr("0*v")};
  try {
    flat.unit_normal(0, 0, 1e-4, 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateNormal);
  }
  SurfaceSpec null_plane;
  null_plane.x = {parse_expr("u"), parse_expr("u"), parse_expr("v")};
  try {
    null_plane.unit_normal(0, 0, 1e-4, 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LightlikeNormal);
  }
}

TEST(Curve, OnSurfaceCurveCarriesNormals) {
  const SurfaceSpec surf = cylinder();
  CurveSpec c;
  c.form = CurveSpec::Form::OnSurface;
  c.x = {parse_expr("0"), parse_expr("s"), ScalarExpr()};
  c.t0 = 0;
  c.t1 = 2;
  c.samples = 201;
  const CurveTable t = reparametrize_unit_speed(c, &surf);
  ASSERT_TRUE(t.has_normal());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.gamma[i].x2, std::cos(t.s[i]), 1e-8);
    EXPECT_NEAR(std::abs(mdot(t.normal[i], t.gamma[i])), 1.0, 1e-8);
    EXPECT_NEAR(t.uv[i][1], t.s[i], 1e-8);
  }
}

TEST(Curve, SpaceCurveIsInvertedOntoSurface) {
  const SurfaceSpec surf = cylinder();
  const CurveTable t = reparametrize_unit_speed(space_curve("0.5*s", "cos(s)", "sin(s)", 0, 2, 101), &surf);
  ASSERT_TRUE(t.has_normal());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const LVec3 p = surf.point(t.uv[i][0], t.uv[i][1]);
    EXPECT_LT(euclidean_norm(p - t.gamma[i]), 1e-8);
  }
}

TEST(Curve, SpaceCurveOffSurfaceIsRejected) {
  const SurfaceSpec surf = cylinder();
  try {
    reparametrize_unit_speed(space_curve("0", "2*cos(s)", "2*sin(s)", 0, 1, 51), &surf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CurveNotOnSurface);
  }
}
