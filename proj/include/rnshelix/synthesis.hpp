#pragma once

#include <vector>

#include "rnshelix/curve.hpp"
#include "rnshelix/expr.hpp"
#include "rnshelix/frames.hpp"

namespace rnshelix {

/// Darboux scalars as functions of arc length, tagged with the causal case.
struct InvariantProfile {
  CaseTag tag = CaseTag::SS;
  ScalarExpr kappa_g, kappa_n, tau_g;
  double s0 = 0.0;
  double s1 = 10.0;
  double h_int = 1e-3;
};

struct DarbouxFrame {
  LVec3 T, B, N;
};

/// Right-handed (B = N x T) frame with the exact signature of the case.
DarbouxFrame canonical_frame(CaseTag c);

struct SynthesizedCurve {
  CaseTag tag = CaseTag::SS;
  std::vector<double> s;
  std::vector<LVec3> gamma, T, B, N;
  double gram_drift = 0.0;
  double h_int = 0.0;
};

/// Classical RK4 on (gamma, T, B, N) without renormalisation.
/// Throws BadInitialFrame, StepTooLarge, EvalError.
SynthesizedCurve integrate_darboux_frame(const InvariantProfile& p, const DarbouxFrame& init,
                                         const LVec3& origin = {});

/// Curve table with derivatives recovered from the integrated frame by grid
/// differences; the integrated N is attached as the normal field.
CurveTable to_curve_table(const SynthesizedCurve& c);

enum class Family {
  F1,      // kappa_g = c, tau_g = m, kappa_n = k
  F2,      // kappa_g = c cosh(ms), tau_g = c sinh(ms), kappa_n = k   (SS, TT)
  F2Dual,  // kappa_g = c sinh(ms), tau_g = c cosh(ms), kappa_n = k   (SS, TT)
  F3,      // kappa_g = c cos(ms),  tau_g = c sin(ms),  kappa_n = k   (ST)
};

struct FamilyParams {
  double c = 1.0;
  double m = 0.0;
  double k = 0.0;
};

/// Throws DomainGuard when the family does not apply to the case or the
/// parameters make kappa_g vanish identically or kappa_g^2 = tau_g^2.
InvariantProfile make_rns_family(CaseTag c, Family f, const FamilyParams& p, double s0,
                                 double s1, double h_int = 1e-3);

}  // namespace rnshelix
