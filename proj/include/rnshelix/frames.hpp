#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rnshelix/curve.hpp"
#include "rnshelix/lorentz.hpp"

namespace rnshelix {

/// SS: spacelike curve on a spacelike surface. ST: spacelike curve on a
/// timelike surface. TT: timelike curve on a timelike surface.
enum class CaseTag { SS, ST, TT };

std::string_view to_string(CaseTag c);
/// Throws InvalidDocument for anything but "SS", "ST", "TT".
CaseTag parse_case(std::string_view text);

/// Gram diagonal (<T,T>, <B,B>, <N,N>) of the Darboux frame.
std::array<double, 3> darboux_signature(CaseTag c);

struct FrenetSample {
  double s = 0.0;
  LVec3 T, n, b;
  double kappa = 0.0;
  double tau = 0.0;
  int epsilon = 1;  // sign of <n,n>; +1 for timelike curves
};

struct DarbouxSample {
  double s = 0.0;
  LVec3 T, B, N;
  double kappa_g = 0.0;
  double kappa_n = 0.0;
  double tau_g = 0.0;
  CaseTag tag = CaseTag::SS;
};

struct PhiRelation {
  double s = 0.0;
  double phi = 0.0;         // unsigned angle between N and n
  double phi_signed = 0.0;  // orientation-aware angle, continuous along the curve
  double residual_kappa = 0.0;
  double residual_tau_g = 0.0;
  bool valid = false;
};

/// Throws LightlikeVelocity, LightlikeNormal, MixedCausalCharacter.
CaseTag classify_case(const CurveTable& curve, double eps = kDefaultNullEps);

/// Throws VanishingCurvature, LightlikePrincipalNormal.
std::vector<FrenetSample> frenet_apparatus(const CurveTable& curve,
                                           double eps = kDefaultNullEps,
                                           double min_kappa = 1e-7);

/// Requires a normal field on the table.
std::vector<DarbouxSample> darboux_apparatus(const CurveTable& curve, CaseTag c);

/// Samples where the angle is undefined are returned with valid = false.
/// Throws GridMismatch, AngleUndefined (no valid sample at all).
std::vector<PhiRelation> check_phi_relations(const std::vector<FrenetSample>& frenet,
                                             const std::vector<DarbouxSample>& darboux,
                                             double eps = kDefaultNullEps);

struct KappaRelationCandidate {
  std::string name;
  double max_rel_defect = 0.0;
  bool holds = false;
};

struct KappaRelation {
  std::vector<KappaRelationCandidate> candidates;
  std::optional<std::string> selected;  // set when exactly one candidate holds
};

/// Tests which algebraic relation between the Frenet curvature and
/// (kappa_g, kappa_n) the samples satisfy.
KappaRelation kappa_relation(const std::vector<FrenetSample>& frenet,
                             const std::vector<DarbouxSample>& darboux, double rel_tol = 1e-6);

struct FrameResiduals {
  double gram = 0.0;    // max |Gram entry - signature|
  double cross = 0.0;   // max |B - N x T| (Euclidean), Darboux only
  double ode = 0.0;     // max |X' - rhs| over X in the frame
};

FrameResiduals darboux_residuals(const std::vector<DarbouxSample>& d);
FrameResiduals frenet_residuals(const std::vector<FrenetSample>& f);

}  // namespace rnshelix
