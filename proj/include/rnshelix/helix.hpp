#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rnshelix/error.hpp"
#include "rnshelix/frames.hpp"
#include "rnshelix/lorentz.hpp"

namespace rnshelix {

/// Characterisation kernels. Each is sigma = (W - kappa_n R) / |R|^{3/2}
/// with W = kappa_g^2 (tau_g / kappa_g)' and R the case radicand
/// (kappa_g^2 - tau_g^2, or kappa_g^2 + tau_g^2 for ST), restricted to
/// samples where R has the kernel's sign.
enum class Kernel {
  SSHyperbolic,  // R > 0: coth beta (spacelike axis) or tanh alpha (timelike axis)
  SSCircular,    // R < 0: cot theta (spacelike axis)
  STHyperbolic,  // coth delta (timelike axis) or tanh zeta (spacelike axis)
  TTHyperbolic,  // R < 0: coth xi (spacelike axis) or tanh psi (timelike axis)
  TTCircular,    // R > 0: cot nu (spacelike axis)
};

std::string_view to_string(Kernel k);
CaseTag kernel_case(Kernel k);
bool is_circular(Kernel k);

enum class AxisForm { Coth, Tanh, Cot };

std::string_view to_string(AxisForm f);

struct SigmaSeries {
  Kernel kernel = Kernel::SSHyperbolic;
  std::string formula_id;
  std::vector<double> s;
  std::vector<double> sigma;  // 0 where masked
  std::vector<bool> valid;
  std::size_t valid_count = 0;
  double masked_fraction = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
  double rel_std = 0.0;  // std / max(|mean|, 1e-12)
  double score = 0.0;    // std / max(|mean|, 1); the constancy test statistic
};

struct MaskOptions {
  double radicand_rel = 1e-8;  // |R| <= radicand_rel * (kappa_g^2 + tau_g^2) is masked
  double kappa_g_rel = 1e-6;   // |kappa_g| <= kappa_g_rel * max|kappa_g| is masked
};

/// Series for every kernel of the case that has at least one valid sample.
/// Throws VanishingKappaG when kappa_g vanishes everywhere, EmptyValidGrid
/// when no kernel has a valid sample.
std::vector<SigmaSeries> sigma_rns(const std::vector<DarbouxSample>& darboux,
                                   const MaskOptions& opt = {});

/// Frenet data recast as a Darboux-type frame (T, n, b) with kappa_n = 0,
/// so the slant-helix test reuses the kernels above. Spacelike curves with
/// spacelike n map to SS, with timelike n to ST; timelike curves to TT with
/// tau_g = -tau.
std::vector<DarbouxSample> pseudo_darboux(const std::vector<FrenetSample>& frenet);

/// Slant-helix series; formula ids are prefixed "slant_". Requires a
/// uniform sign of <n,n> along the curve (else MixedCausalCharacter).
std::vector<SigmaSeries> sigma_slant(const std::vector<FrenetSample>& frenet,
                                     const MaskOptions& opt = {});

struct Detection {
  bool verdict = false;
  std::optional<std::size_t> series;  // index into the input list
  std::optional<AxisForm> form;
  std::string formula;  // e.g. "ss_coth"
  double constant = 0.0;
  std::optional<LorentzAngle> angle;
  std::optional<ErrorKind> error;  // AmbiguousAngle
  std::string detail;
};

/// Picks the most constant series with score < tol (ties favour hyperbolic
/// kernels) and inverts its angle function.
Detection detect_rns_helix(const std::vector<SigmaSeries>& series, double tol);

struct BranchResidual {
  int branch = 1;
  int candidate = 0;  // cot forms: 0 for arccot(c), 1 for arccot(-c)
  double angle = 0.0;
  double constancy_residual = 0.0;
};

struct AxisResult {
  LVec3 d;                 // mean over valid samples
  Causal d_character = Causal::Spacelike;
  AxisForm form = AxisForm::Coth;
  LorentzAngle angle;
  int branch = 1;
  int candidate = 0;
  double constancy_residual = 0.0;  // max |d(s) - d| (Euclidean)
  double gram_residual = 0.0;       // |<d,d> -+ 1|
  double max_derivative = 0.0;      // max |d'(s)| by grid differences
  double inner_B_spread = 0.0;      // max - min of <B(s), d>
  double angle_mismatch = 0.0;      // max |<B(s), d> - angle function|
  double max_inner_T = 0.0;         // max |<T(s), d>|
  double max_inner_N = 0.0;         // max |<N(s), d>|
  std::vector<double> s;
  std::vector<LVec3> per_sample;  // d(s), zero where masked
  std::vector<bool> valid;
  std::vector<BranchResidual> branches;
};

/// Axis for one branch/candidate. Throws RadicandViolation if a valid
/// sample of `series` has a radicand of the wrong sign.
AxisResult axis_rns(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series,
                    AxisForm form, double angle, int branch, int candidate = 0);

/// Evaluates all branches (and both cot candidates) and keeps the one with
/// the smallest constancy residual; `branches` lists every residual.
AxisResult best_axis(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series,
                     const Detection& det);

/// max over valid interior samples of |kbar^2 - expected| where kbar is the
/// geodesic curvature of s -> B(s) on the unit pseudo-sphere and expected is
/// |sigma^2 -+ 1| for the kernel.
double indicatrix_defect(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series);

struct SpecialFlags {
  bool geodesic = false;
  bool asymptotic = false;
  bool line_of_curvature = false;
};

SpecialFlags classify_special(const std::vector<DarbouxSample>& darboux, double tol = 1e-6);

struct PropositionResult {
  std::string name;
  bool applicable = false;
  bool passed = true;
  std::string detail;
};

struct SlantResult {
  std::vector<SigmaSeries> sigma;
  Detection detection;
  std::optional<AxisResult> axis;
  std::optional<std::string> error;
};

struct HelixOptions {
  double tol = 1e-3;        // constancy
  double special_tol = 1e-6;
  double prop_tol = 1e-4;   // zero tests in the proposition checks
  double axis_agree = 1e-4;
  MaskOptions mask;
};

struct HelixReport {
  CaseTag tag = CaseTag::SS;
  SpecialFlags flags;
  std::vector<SigmaSeries> sigma;
  std::optional<std::string> sigma_error;
  Detection rns;
  std::optional<AxisResult> axis;
  std::optional<double> indicatrix;
  std::optional<SlantResult> slant;
  std::vector<PropositionResult> propositions;
};

std::vector<PropositionResult> check_propositions(const HelixReport& report,
                                                  const std::vector<FrenetSample>* frenet,
                                                  const std::vector<DarbouxSample>& darboux,
                                                  const HelixOptions& opt = {});

/// Slant-helix test on Frenet data; errors are recorded, not thrown.
SlantResult analyze_slant(const std::vector<FrenetSample>& frenet, const HelixOptions& opt = {});

/// Full helix analysis. `frenet` may be null when the Frenet frame is
/// unavailable; the slant test and Frenet-based checks are then skipped.
HelixReport analyze_helix(const std::vector<DarbouxSample>& darboux,
                          const std::vector<FrenetSample>* frenet, const HelixOptions& opt = {});

}  // namespace rnshelix
