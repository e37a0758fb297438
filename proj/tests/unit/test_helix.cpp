#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rnshelix/error.hpp"
#include "rnshelix/helix.hpp"
#include "rnshelix/synthesis.hpp"

using namespace rnshelix;

namespace {

struct Analysis {
  CurveTable table;
  std::vector<DarbouxSample> darboux;
  std::vector<FrenetSample> frenet;
  HelixReport report;
};

Analysis analyze(const InvariantProfile& p, bool with_frenet = true) {
  Analysis r;
  r.table = to_curve_table(integrate_darboux_frame(p, canonical_frame(p.tag)));
  r.darboux = darboux_apparatus(r.table, p.tag);
  if (with_frenet) r.frenet = frenet_apparatus(r.table);
  r.report = analyze_helix(r.darboux, with_frenet ? &r.frenet : nullptr);
  return r;
}

Analysis family(CaseTag c, Family f, FamilyParams fp, double s0, double s1, double h_int = 1e-3) {
  return analyze(make_rns_family(c, f, fp, s0, s1, h_int));
}

// Scalar-only Darboux samples; sigma_rns reads nothing else.
std::vector<DarbouxSample> scalars(CaseTag tag, const ScalarExpr& kg, const ScalarExpr& kn,
                                   const ScalarExpr& tg, double s0, double s1, int n, double lambda = 1.0) {
  std::vector<DarbouxSample> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = s0 + (s1 - s0) * i / (n - 1);
    out[i].s = s;
    out[i].tag = tag;
    out[i].kappa_g = lambda * kg.eval(s);
    out[i].kappa_n = lambda * kn.eval(s);
    out[i].tau_g = lambda * tg.eval(s);
  }
  return out;
}

SigmaSeries constant_series(Kernel k, double value, std::size_t n = 101) {
  SigmaSeries s;
  s.kernel = k;
  s.formula_id = std::string(to_string(k));
  s.s.resize(n);
  s.sigma.assign(n, value);
  s.valid.assign(n, true);
  s.valid_count = n;
  s.mean = value;
  return s;
}

}  // namespace

TEST(Helix, ConstantSSSigmaMatchesHandValue) {
  const auto d = scalars(CaseTag::SS, ScalarExpr(2.0), ScalarExpr(0.5), ScalarExpr(1.0), 0, 10, 1001);
  const auto series = sigma_rns(d);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].kernel, Kernel::SSHyperbolic);
  EXPECT_NEAR(series[0].mean, oracle::kSsConstantSigma, 1e-12);
  EXPECT_LT(series[0].rel_std, 1e-10);
}

TEST(Helix, HyperbolicFamilySigmaIsConstant) {
  const auto d = scalars(CaseTag::SS, parse_expr("cosh(0.5*s)"), ScalarExpr(0.2), parse_expr("sinh(0.5*s)"),
                         -5, 5, 2001);
  const auto series = sigma_rns(d);
  ASSERT_FALSE(series.empty());
  EXPECT_NEAR(std::abs(series[0].mean), 0.3, 1e-6);
  EXPECT_LT(series[0].rel_std, 1e-6);
}

TEST(Helix, GeodesicHasNoKernel) {
  const auto d = scalars(CaseTag::ST, ScalarExpr(0.0), ScalarExpr(1.0), ScalarExpr(0.0), 0, 1, 11);
  try {
    sigma_rns(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VanishingKappaG);
  }
}

TEST(Helix, RadicandSignChoosesKernel) {
  const auto circ = sigma_rns(scalars(CaseTag::SS, ScalarExpr(1.0), ScalarExpr(0.5), ScalarExpr(2.0), 0, 1, 11));
  ASSERT_EQ(circ.size(), 1u);
  EXPECT_EQ(circ[0].kernel, Kernel::SSCircular);
  const auto tt = sigma_rns(scalars(CaseTag::TT, ScalarExpr(0.5), ScalarExpr(1.0), ScalarExpr(2.0), 0, 1, 11));
  ASSERT_EQ(tt.size(), 1u);
  EXPECT_EQ(tt[0].kernel, Kernel::TTHyperbolic);
}

TEST(Helix, DetectionAnglesFromInverseFunctions) {
  const Detection tanh_det = detect_rns_helix({constant_series(Kernel::SSHyperbolic, oracle::kSsConstantSigma)}, 1e-3);
  ASSERT_TRUE(tanh_det.verdict);
  EXPECT_EQ(tanh_det.form, AxisForm::Tanh);
  EXPECT_EQ(tanh_det.formula, "ss_tanh");
  EXPECT_NEAR(tanh_det.angle->value, oracle::kAtanhSigma, 1e-12);

  const Detection coth_det = detect_rns_helix({constant_series(Kernel::SSHyperbolic, 2.0)}, 1e-3);
  ASSERT_TRUE(coth_det.verdict);
  EXPECT_EQ(coth_det.form, AxisForm::Coth);
  EXPECT_NEAR(coth_det.angle->value, oracle::kAcoth2, 1e-12);

  const Detection cot_det = detect_rns_helix({constant_series(Kernel::SSCircular, 1.0 / std::tan(0.4))}, 1e-3);
  ASSERT_TRUE(cot_det.verdict);
  EXPECT_EQ(cot_det.form, AxisForm::Cot);
  EXPECT_NEAR(cot_det.angle->value, 0.4, 1e-12);
}

TEST(Helix, NonConstantSeriesIsRejected) {
  SigmaSeries s = constant_series(Kernel::SSHyperbolic, 1.0);
  s.std_dev = 0.3;
  s.rel_std = 0.3;
  s.score = 0.3;
  const Detection d = detect_rns_helix({s}, 1e-3);
  EXPECT_FALSE(d.verdict);
  EXPECT_FALSE(d.angle.has_value());
}

TEST(Helix, UnitConstantIsAmbiguous) {
  const Detection d = detect_rns_helix({constant_series(Kernel::TTHyperbolic, 1.0)}, 1e-3);
  EXPECT_FALSE(d.verdict);
  ASSERT_TRUE(d.error.has_value());
  EXPECT_EQ(*d.error, ErrorKind::AmbiguousAngle);
}

TEST(Helix, TieGoesToHyperbolicKernel) {
  const Detection d = detect_rns_helix(
      {constant_series(Kernel::SSCircular, 2.0), constant_series(Kernel::SSHyperbolic, 2.0)}, 1e-3);
  ASSERT_TRUE(d.verdict);
  EXPECT_EQ(*d.series, 1u);
}

TEST(Helix, ConstantSSAxis) {
  const Analysis r = family(CaseTag::SS, Family::F1, {2, 1, 0.5}, 0, 10);
  ASSERT_TRUE(r.report.rns.verdict);
  EXPECT_NEAR(r.report.rns.angle->value, oracle::kAtanhSigma, 1e-8);
  ASSERT_TRUE(r.report.axis.has_value());
  const AxisResult& a = *r.report.axis;
  EXPECT_EQ(a.d_character, Causal::Timelike);
  EXPECT_NEAR(mdot(a.d, a.d), -1.0, 1e-8);
  EXPECT_LT(a.constancy_residual, 1e-6);
  EXPECT_LT(a.max_derivative, 1e-4);
  EXPECT_LT(a.inner_B_spread, 1e-5);
  EXPECT_LT(a.angle_mismatch, 1e-5);
  EXPECT_EQ(a.branches.size(), 2u);
  ASSERT_TRUE(r.report.indicatrix.has_value());
  EXPECT_LT(*r.report.indicatrix, 1e-6);
}

TEST(Helix, FamiliesAreDetected) {
  struct Row {
    CaseTag c;
    Family f;
    FamilyParams p;
    double s0, s1;
    AxisForm form;
  };
  const Row rows[] = {
      {CaseTag::SS, Family::F2, {1, 0.5, 0.2}, -5, 5, AxisForm::Tanh},
      {CaseTag::SS, Family::F2, {1, 2.5, 0.2}, -1, 1, AxisForm::Coth},
      {CaseTag::SS, Family::F1, {2, 1, 3}, 0, 1, AxisForm::Coth},
      {CaseTag::TT, Family::F1, {0.5, 1, 0.3}, 0, 10, AxisForm::Tanh},
      {CaseTag::ST, Family::F1, {0.5, 1, 2}, 0, 10, AxisForm::Coth},
      {CaseTag::ST, Family::F3, {1, 0.3, 2}, -5, 5, AxisForm::Coth},
  };
  for (const Row& row : rows) {
    const Analysis r = family(row.c, row.f, row.p, row.s0, row.s1);
    const std::string label = std::string(to_string(row.c)) + " " + std::to_string(row.p.c) + "," +
                              std::to_string(row.p.m) + "," + std::to_string(row.p.k);
    ASSERT_TRUE(r.report.rns.verdict) << label;
    EXPECT_EQ(r.report.rns.form, row.form) << label;
    const auto& s = r.report.sigma[*r.report.rns.series];
    EXPECT_LT(s.rel_std, 1e-6) << label;
    if (row.f != Family::F1) {
      EXPECT_NEAR(std::abs(s.mean), std::abs(row.p.m - row.p.k) / row.p.c, 1e-5 * std::abs(s.mean)) << label;
    }
    ASSERT_TRUE(r.report.axis.has_value()) << label;
    const double target = r.report.axis->d_character == Causal::Timelike ? -1.0 : 1.0;
    EXPECT_NEAR(mdot(r.report.axis->d, r.report.axis->d), target, 1e-6) << label;
    EXPECT_LT(r.report.axis->max_derivative, 1e-4) << label;
    EXPECT_LT(r.report.axis->inner_B_spread, 1e-5) << label;
  }
}

TEST(Helix, CircularKernelAxis) {
  const Analysis r = family(CaseTag::SS, Family::F1, {1, 2, 0.5}, 0, 2);
  ASSERT_TRUE(r.report.rns.verdict);
  EXPECT_EQ(r.report.rns.form, AxisForm::Cot);
  EXPECT_EQ(r.report.axis->d_character, Causal::Spacelike);
  EXPECT_NEAR(mdot(r.report.axis->d, r.report.axis->d), 1.0, 1e-6);
  EXPECT_LT(r.report.axis->inner_B_spread, 1e-5);
}

TEST(Helix, ScaleCovarianceWithoutNormalCurvature) {
  const ScalarExpr kg = parse_expr("cosh(0.5*s)"), tg = parse_expr("sinh(0.5*s)"), zero(0.0);
  const auto base = sigma_rns(scalars(CaseTag::SS, kg, zero, tg, -3, 3, 601));
  for (double lambda : {0.5, 2.0, 7.0}) {
    const auto scaled = sigma_rns(scalars(CaseTag::SS, kg, zero, tg, -3, 3, 601, lambda));
    ASSERT_EQ(scaled.size(), base.size());
    for (std::size_t i = 0; i < base[0].sigma.size(); ++i) {
      EXPECT_NEAR(scaled[0].sigma[i] * lambda, base[0].sigma[i], 1e-9);
    }
  }
}

TEST(Helix, ScaleInvarianceOfVerdictOnConstantProfiles) {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto series = sigma_rns(scalars(CaseTag::SS, ScalarExpr(2.0), ScalarExpr(0.5), ScalarExpr(1.0), 0, 1,
                                          101, lambda));
    EXPECT_TRUE(detect_rns_helix(series, 1e-3).verdict);
  }
}

TEST(Helix, NormalCurvatureTermIsScaleInvariant) {
  // With only the kappa_n term, sigma does not scale; covariance needs kappa_n = 0.
  const auto a = sigma_rns(scalars(CaseTag::SS, ScalarExpr(2.0), ScalarExpr(0.5), ScalarExpr(1.0), 0, 1, 11));
  const auto b = sigma_rns(scalars(CaseTag::SS, ScalarExpr(2.0), ScalarExpr(0.5), ScalarExpr(1.0), 0, 1, 11, 3.0));
  EXPECT_NEAR(a[0].mean, b[0].mean, 1e-12);
}

TEST(Helix, AsymptoticReductionToSlant) {
  const Analysis r = family(CaseTag::SS, Family::F2, {1, 0.5, 0}, -2, 2, 2e-3);
  ASSERT_TRUE(r.report.flags.asymptotic);
  ASSERT_TRUE(r.report.slant.has_value());
  ASSERT_FALSE(r.report.slant->error.has_value());
  const auto& a = r.report.sigma[0];
  const auto& b = r.report.slant->sigma[0];
  ASSERT_EQ(a.sigma.size(), b.sigma.size());
  std::size_t compared = 0;
  // The slant series differentiates the tangent three times on the grid, so the
  // one-sided stencils at the ends are left out.
  for (std::size_t i = 3; i + 3 < a.sigma.size(); ++i) {
    if (!a.valid[i] || !b.valid[i]) continue;
    ++compared;
    EXPECT_NEAR(std::abs(a.sigma[i]), std::abs(b.sigma[i]), 1e-6) << "sample " << i;
  }
  EXPECT_GT(compared, a.sigma.size() * 9 / 10);
  ASSERT_TRUE(r.report.rns.verdict);
  ASSERT_TRUE(r.report.slant->detection.verdict);
  const auto& p = r.report.propositions[0];
  EXPECT_EQ(p.name, "asymptotic_rns_iff_slant");
  EXPECT_TRUE(p.applicable);
  EXPECT_TRUE(p.passed) << p.detail;
}

TEST(Helix, SlantDetectorOnHelixLikeFrenetData) {
  const Analysis r = family(CaseTag::SS, Family::F1, {2, 1, 0}, 0, 5);
  ASSERT_TRUE(r.report.slant.has_value());
  EXPECT_TRUE(r.report.slant->detection.verdict);
  EXPECT_NEAR(r.report.slant->detection.constant, 0.0, 1e-6);
}

TEST(Helix, SpecialFlags) {
  const auto circle = scalars(CaseTag::ST, ScalarExpr(0.0), ScalarExpr(1.0), ScalarExpr(0.0), 0, 1, 11);
  const SpecialFlags f = classify_special(circle);
  EXPECT_TRUE(f.geodesic);
  EXPECT_TRUE(f.line_of_curvature);
  EXPECT_FALSE(f.asymptotic);
  const auto asym = scalars(CaseTag::SS, ScalarExpr(1.0), ScalarExpr(0.0), ScalarExpr(0.3), 0, 1, 11);
  EXPECT_TRUE(classify_special(asym).asymptotic);
  const auto generic = scalars(CaseTag::SS, ScalarExpr(1.0), ScalarExpr(0.2), ScalarExpr(0.3), 0, 1, 11);
  const SpecialFlags g = classify_special(generic);
  EXPECT_FALSE(g.geodesic || g.asymptotic || g.line_of_curvature);
}

TEST(Helix, LineOfCurvatureWithUnitRatioIsNotAHelix) {
  // tau_g = 0 in SS: |sigma| = |kappa_n / kappa_g| which is never a coth value below 1.
  const Analysis r = family(CaseTag::SS, Family::F1, {2, 0, 0.5}, 0, 5);
  EXPECT_TRUE(r.report.flags.line_of_curvature);
  if (r.report.rns.verdict) EXPECT_NE(r.report.rns.form, AxisForm::Coth);
}

TEST(Helix, TimelikeLineOfCurvatureCounterexample) {
  // ST with |kappa_n| < |kappa_g| has a timelike principal normal; the tanh branch
  // yields a spacelike axis on a line of curvature and the checker reports it.
  const Analysis r = family(CaseTag::ST, Family::F1, {1, 0, 0.5}, 0, 1.5);
  ASSERT_TRUE(r.report.flags.line_of_curvature);
  ASSERT_TRUE(r.report.rns.verdict);
  EXPECT_EQ(r.report.rns.form, AxisForm::Tanh);
  EXPECT_EQ(r.report.axis->d_character, Causal::Spacelike);
  EXPECT_LT(r.report.axis->inner_B_spread, 1e-5);
  const auto& p = r.report.propositions[1];
  EXPECT_EQ(p.name, "rns_not_line_of_curvature");
  EXPECT_TRUE(p.applicable);
  EXPECT_FALSE(p.passed);
  EXPECT_EQ(r.frenet.front().epsilon, -1);
}

TEST(Helix, CorollaryChecksOnDetectedHelices) {
  const Analysis ss = family(CaseTag::SS, Family::F1, {2, 1, 0.5}, 0, 10);
  EXPECT_TRUE(ss.report.propositions[4].applicable);
  EXPECT_TRUE(ss.report.propositions[4].passed) << ss.report.propositions[4].detail;

  const Analysis tt = family(CaseTag::TT, Family::F1, {0.5, 1, 0.3}, 0, 10);
  ASSERT_TRUE(tt.report.rns.verdict);
  EXPECT_TRUE(tt.report.propositions[5].applicable);
  EXPECT_TRUE(tt.report.propositions[5].passed) << tt.report.propositions[5].detail;

  const Analysis st = family(CaseTag::ST, Family::F1, {0.5, 0.2, 0.3}, 0, 3);
  ASSERT_TRUE(st.report.rns.verdict);
  EXPECT_TRUE(st.report.propositions[3].applicable);
  EXPECT_TRUE(st.report.propositions[3].passed) << st.report.propositions[3].detail;
}

TEST(Helix, PolynomialCurveIsNotAHelix) {
  InvariantProfile p;
  p.tag = CaseTag::SS;
  p.kappa_g = parse_expr("1 + 0.3*s + 0.2*s^2");
  p.kappa_n = parse_expr("0.1*s^3");
  p.tau_g = parse_expr("0.5 - 0.4*s");
  p.s0 = 0;
  p.s1 = 2;
  const Analysis r = analyze(p);
  EXPECT_FALSE(r.report.rns.verdict);
}
