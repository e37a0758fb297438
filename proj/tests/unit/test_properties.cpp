#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "rnshelix/error.hpp"
#include "rnshelix/helix.hpp"
#include "rnshelix/synthesis.hpp"

using namespace rnshelix;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

// Smooth profile a + b sin(w s + p) with amplitude kept below the offset.
std::string wave(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> off(lo, hi), amp(0.0, 0.2), freq(0.2, 1.5), ph(0.0, 6.0);
  return num(off(rng)) + " + " + num(amp(rng)) + "*sin(" + num(freq(rng)) + "*s + " + num(ph(rng)) + ")";
}

InvariantProfile bounded_profile(std::mt19937_64& rng, CaseTag tag) {
  InvariantProfile p;
  p.tag = tag;
  p.s0 = 0;
  p.s1 = 4;
  // The dominant invariant keeps each frame bounded so the integration stays accurate.
  switch (tag) {
    case CaseTag::SS:
      p.kappa_g = parse_expr(wave(rng, 1.5, 2.5));
      p.kappa_n = parse_expr(wave(rng, -0.6, 0.6));
      p.tau_g = parse_expr(wave(rng, -0.6, 0.6));
      break;
    case CaseTag::TT:
      p.kappa_g = parse_expr(wave(rng, -0.6, 0.6));
      p.kappa_n = parse_expr(wave(rng, -0.6, 0.6));
      p.tau_g = parse_expr(wave(rng, 1.5, 2.5));
      break;
    case CaseTag::ST:
      p.kappa_g = parse_expr(wave(rng, -0.6, 0.6));
      p.kappa_n = parse_expr(wave(rng, 1.5, 2.5));
      p.tau_g = parse_expr(wave(rng, -0.6, 0.6));
      break;
  }
  return p;
}

}  // namespace

TEST(Properties, RandomProfilesRoundTripAndStayOrthonormal) {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 12; ++trial) {
    const CaseTag tag = static_cast<CaseTag>(trial % 3);
    const InvariantProfile p = bounded_profile(rng, tag);
    const SynthesizedCurve c = integrate_darboux_frame(p, canonical_frame(tag));
    EXPECT_LT(c.gram_drift, 1e-8);
    const CurveTable t = to_curve_table(c);
    ASSERT_EQ(classify_case(t), tag);
    const auto d = darboux_apparatus(t, tag);
    const FrameResiduals r = darboux_residuals(d);
    EXPECT_LT(r.gram, 1e-8);
    EXPECT_LT(r.cross, 1e-10);
    EXPECT_LT(r.ode, 1e-4);
    double worst = 0.0;
    for (const auto& x : d) {
      worst = std::max({worst, std::abs(x.kappa_g - p.kappa_g.eval(x.s)),
                        std::abs(x.kappa_n - p.kappa_n.eval(x.s)), std::abs(x.tau_g - p.tau_g.eval(x.s))});
    }
    EXPECT_LT(worst, 1e-5) << "trial " << trial;
  }
}

TEST(Properties, RandomProfilesSatisfyPhiRelations) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const CaseTag tag = static_cast<CaseTag>(trial % 3);
    const CurveTable t = to_curve_table(integrate_darboux_frame(bounded_profile(rng, tag), canonical_frame(tag)));
    std::vector<FrenetSample> f;
    try {
      f = frenet_apparatus(t);
    } catch (const Error&) {
      continue;
    }
    for (const auto& r : check_phi_relations(f, darboux_apparatus(t, tag))) {
      if (!r.valid) continue;
      EXPECT_LT(std::abs(r.residual_kappa), 1e-6);
      EXPECT_LT(std::abs(r.residual_tau_g), 1e-4);
    }
  }
}

TEST(Properties, ConstantProfilesAlwaysGiveConstantSigmaAndAxis) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> small(-0.6, 0.6), big(1.5, 2.5);
  int detected = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const CaseTag tag = static_cast<CaseTag>(trial % 3);
    double kg = small(rng), kn = small(rng), tg = small(rng);
    if (tag == CaseTag::SS) kg = big(rng);
    if (tag == CaseTag::TT) tg = big(rng);
    if (tag == CaseTag::ST) kn = big(rng);
    const InvariantProfile p = make_rns_family(tag, Family::F1, {kg, tg, kn}, 0, 5);
    const CurveTable t = to_curve_table(integrate_darboux_frame(p, canonical_frame(tag)));
    const auto d = darboux_apparatus(t, tag);
    const auto series = sigma_rns(d);
    ASSERT_FALSE(series.empty());
    EXPECT_LT(series[0].score, 1e-6);
    const Detection det = detect_rns_helix(series, 1e-3);
    if (det.error) continue;
    ASSERT_TRUE(det.verdict);
    ++detected;
    const AxisResult a = best_axis(d, series[*det.series], det);
    const double target = a.d_character == Causal::Timelike ? -1.0 : 1.0;
    EXPECT_NEAR(mdot(a.d, a.d), target, 1e-6);
    EXPECT_LT(a.max_derivative, 1e-4);
    EXPECT_LT(a.inner_B_spread, 1e-5);
    // The angle function evaluated on the recovered angle reproduces the constant.
    const double c = std::abs(det.constant);
    const double back = det.form == AxisForm::Coth   ? 1.0 / std::tanh(det.angle->value)
                        : det.form == AxisForm::Tanh ? std::tanh(det.angle->value)
                                                     : std::abs(1.0 / std::tan(det.angle->value));
    EXPECT_NEAR(back, c, 1e-6 * std::max(1.0, c));
  }
  EXPECT_GE(detected, 10);
}

TEST(Properties, ScaleCovarianceOnRandomAsymptoticProfiles) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> cdist(0.5, 2.0), mdist(0.1, 0.8), ldist(0.2, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = cdist(rng), m = mdist(rng), lambda = ldist(rng);
    std::vector<DarbouxSample> a(401), b(401);
    for (int i = 0; i < 401; ++i) {
      const double s = -2.0 + 4.0 * i / 400;
      a[i].s = b[i].s = s;
      a[i].kappa_g = c * std::cosh(m * s);
      a[i].tau_g = c * std::sinh(m * s);
      b[i].kappa_g = lambda * a[i].kappa_g;
      b[i].tau_g = lambda * a[i].tau_g;
    }
    const auto sa = sigma_rns(a), sb = sigma_rns(b);
    EXPECT_NEAR(sb[0].mean * lambda, sa[0].mean, 1e-9 * std::abs(sa[0].mean));
    EXPECT_NEAR(std::abs(sa[0].mean), m / c, 1e-6 * m / c);
    EXPECT_EQ(detect_rns_helix(sa, 1e-3).verdict, detect_rns_helix(sb, 1e-3).verdict);
  }
}

TEST(Properties, LinesOfCurvatureNeverGiveCothHelix) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const CaseTag tag = static_cast<CaseTag>(trial % 3);
    InvariantProfile p = bounded_profile(rng, tag);
    p.tau_g = ScalarExpr(0.0);
    const CurveTable t = to_curve_table(integrate_darboux_frame(p, canonical_frame(tag)));
    const auto d = darboux_apparatus(t, tag);
    std::vector<SigmaSeries> series;
    try {
      series = sigma_rns(d);
    } catch (const Error&) {
      continue;
    }
    const Detection det = detect_rns_helix(series, 1e-3);
    if (det.verdict) EXPECT_NE(det.form, AxisForm::Coth) << "trial " << trial;
  }
}
