#include "rnshelix/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rnshelix/error.hpp"
#include "rnshelix/numdiff.hpp"

namespace rnshelix {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

double grid_step(const std::vector<double>& s) {
  if (s.size() < 2) throw Error(ErrorKind::GridMismatch, "grid needs at least two samples");
  return (s.back() - s.front()) / static_cast<double>(s.size() - 1);
}

double max_abs_diff(const LVec3& a, const LVec3& b) {
  const LVec3 d = a - b;
  return std::max({std::abs(d.x1), std::abs(d.x2), std::abs(d.x3)});
}

}  // namespace

std::string_view to_string(CaseTag c) {
  switch (c) {
    case CaseTag::SS: return "SS";
    case CaseTag::ST: return "ST";
    case CaseTag::TT: return "TT";
  }
  return "?";
}

CaseTag parse_case(std::string_view text) {
  if (text == "SS") return CaseTag::SS;
  if (text == "ST") return CaseTag::ST;
  if (text == "TT") return CaseTag::TT;
  throw Error(ErrorKind::InvalidDocument, "case must be SS, ST or TT, got '" + std::string(text) + "'");
}

std::array<double, 3> darboux_signature(CaseTag c) {
  switch (c) {
    case CaseTag::SS: return {1.0, 1.0, -1.0};
    case CaseTag::TT: return {-1.0, 1.0, 1.0};
    case CaseTag::ST: return {1.0, -1.0, 1.0};
  }
  return {0.0, 0.0, 0.0};
}

CaseTag classify_case(const CurveTable& curve, double eps) {
  if (!curve.has_normal()) {
    throw Error(ErrorKind::InvalidDocument, "classification needs a surface normal field");
  }
  std::optional<CaseTag> tag;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double s = curve.s[i];
    const Causal cv = causal_direction(curve.d1[i], eps);
    const Causal cn = causal_direction(curve.normal[i], eps);
    if (cv == Causal::Lightlike) {
      throw Error(ErrorKind::LightlikeVelocity, "lightlike velocity at s=" + fmt(s), s);
    }
    if (cn == Causal::Lightlike) {
      throw Error(ErrorKind::LightlikeNormal, "lightlike surface normal at s=" + fmt(s), s);
    }
    if (cv == Causal::Timelike && cn == Causal::Timelike) {
      throw Error(ErrorKind::MixedCausalCharacter,
                  "timelike velocity with timelike normal at s=" + fmt(s), s);
    }
    const CaseTag here = cv == Causal::Timelike   ? CaseTag::TT
                         : cn == Causal::Timelike ? CaseTag::SS
                                                  : CaseTag::ST;
    if (tag && *tag != here) {
      throw Error(ErrorKind::MixedCausalCharacter,
                  "causal configuration changes from " + std::string(to_string(*tag)) + " to " +
                      std::string(to_string(here)) + " at s=" + fmt(s),
                  s);
    }
    tag = here;
  }
  if (!tag) throw Error(ErrorKind::EmptyValidGrid, "no samples to classify");
  return *tag;
}

std::vector<FrenetSample> frenet_apparatus(const CurveTable& curve, double eps, double min_kappa) {
  std::vector<FrenetSample> out;
  out.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double s = curve.s[i];
    FrenetSample f;
    f.s = s;
    f.T = curve.d1[i];
    const LVec3& acc = curve.d2[i];
    f.kappa = mnorm(acc);
    const bool timelike_curve = mdot(f.T, f.T) < 0.0;
    if (f.kappa < min_kappa) {
      if (euclidean_norm(acc) >= min_kappa && causal_direction(acc, eps) == Causal::Lightlike) {
        throw Error(ErrorKind::LightlikePrincipalNormal, "lightlike principal normal at s=" + fmt(s), s);
      }
      throw Error(ErrorKind::VanishingCurvature, "curvature vanishes at s=" + fmt(s), s);
    }
    if (causal_direction(acc, eps) == Causal::Lightlike) {
      throw Error(ErrorKind::LightlikePrincipalNormal, "lightlike principal normal at s=" + fmt(s), s);
    }
    f.n = acc / f.kappa;
    f.b = mcross(f.n, f.T);
    f.epsilon = mdot(f.n, f.n) < 0.0 ? -1 : 1;
    if (!out.empty() && f.epsilon != out.back().epsilon) {
      throw Error(ErrorKind::LightlikePrincipalNormal,
                  "principal normal changes causal character near s=" + fmt(s), s);
    }
    const double proj = mdot(curve.d3[i], f.b) / f.kappa;
    f.tau = timelike_curve ? proj : -f.epsilon * proj;
    out.push_back(f);
  }
  return out;
}

std::vector<DarbouxSample> darboux_apparatus(const CurveTable& curve, CaseTag c) {
  if (!curve.has_normal()) {
    throw Error(ErrorKind::InvalidDocument, "Darboux frame needs a surface normal field");
  }
  std::vector<DarbouxSample> out;
  out.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    DarbouxSample d;
    d.s = curve.s[i];
    d.tag = c;
    d.T = curve.d1[i];
    d.N = curve.normal[i];
    d.B = mcross(d.N, d.T);
    const LVec3& Tp = curve.d2[i];
    const LVec3& Np = curve.normal_prime[i];
    switch (c) {
      case CaseTag::SS:
        d.kappa_g = mdot(Tp, d.B);
        d.kappa_n = -mdot(Tp, d.N);
        d.tau_g = mdot(Np, d.B);
        break;
      case CaseTag::TT:
        d.kappa_g = mdot(Tp, d.B);
        d.kappa_n = mdot(Tp, d.N);
        d.tau_g = mdot(Np, d.B);
        break;
      case CaseTag::ST:
        d.kappa_g = -mdot(Tp, d.B);
        d.kappa_n = -mdot(Tp, d.N);
        d.tau_g = -mdot(Np, d.B);
        break;
    }
    out.push_back(d);
  }
  return out;
}

std::vector<PhiRelation> check_phi_relations(const std::vector<FrenetSample>& frenet,
                                             const std::vector<DarbouxSample>& darboux,
                                             double eps) {
  if (frenet.size() != darboux.size()) {
    throw Error(ErrorKind::GridMismatch, "Frenet and Darboux grids differ in size");
  }
  const std::size_t n = frenet.size();
  std::vector<PhiRelation> out(n);
  std::vector<bool> mask(n, false);
  std::vector<double> phis(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const FrenetSample& f = frenet[i];
    const DarbouxSample& d = darboux[i];
    if (std::abs(f.s - d.s) > 1e-9 * std::max(1.0, std::abs(f.s))) {
      throw Error(ErrorKind::GridMismatch, "sample grids disagree at s=" + fmt(f.s), f.s);
    }
    PhiRelation& r = out[i];
    r.s = f.s;
    LVec3 nn = f.n;
    if (mdot(d.N, d.N) < 0.0 && mdot(nn, nn) < 0.0 && mdot(d.N, nn) > 0.0) nn = -nn;
    LorentzAngle a;
    try {
      a = lorentz_angle(d.N, nn, eps);
    } catch (const Error&) {
      continue;
    }
    // B and N span a timelike plane in SS and ST; a parallel pair is read there.
    if (d.tag != CaseTag::TT && a.kind == AngleKind::CosSpacelikePlane) {
      const double ratio = std::abs(mdot(d.N, nn)) / (mnorm(d.N) * mnorm(nn));
      a = {std::acosh(std::max(1.0, ratio)), AngleKind::CoshTimelikePlane, 1};
    }
    r.phi = a.value;
    r.valid = true;
    mask[i] = true;

    const double p = mdot(f.n, d.B) / mdot(d.B, d.B);
    const double q = mdot(f.n, d.N) / mdot(d.N, d.N);
    const double k = f.kappa;
    const double kg = std::abs(d.kappa_g);
    const double kn = std::abs(d.kappa_n);
    switch (d.tag) {
      case CaseTag::SS:
        r.phi_signed = -sgn(p) * sgn(q) * r.phi;
        r.residual_kappa = f.epsilon > 0
                               ? std::max(std::abs(kg - k * std::cosh(r.phi)), std::abs(kn - k * std::sinh(r.phi)))
                               : std::max(std::abs(kn - k * std::cosh(r.phi)), std::abs(kg - k * std::sinh(r.phi)));
        break;
      case CaseTag::ST:
        r.phi_signed = -sgn(p) * sgn(q) * r.phi;
        r.residual_kappa = f.epsilon > 0
                               ? std::max(std::abs(kn - k * std::cosh(r.phi)), std::abs(kg - k * std::sinh(r.phi)))
                               : std::max(std::abs(kg - k * std::cosh(r.phi)), std::abs(kn - k * std::sinh(r.phi)));
        break;
      case CaseTag::TT:
        r.phi_signed = std::atan2(-p, q);
        r.residual_kappa = std::max(std::abs(d.kappa_n - k * std::cos(r.phi)),
                                    std::abs(kg - k * std::sin(r.phi)));
        break;
    }
    phis[i] = r.phi_signed;
  }
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw Error(ErrorKind::AngleUndefined, "angle between N and n undefined on the whole grid");
  }
  // Remove 2*pi jumps of the circular angle before differentiating.
  if (!darboux.empty() && darboux.front().tag == CaseTag::TT) {
    std::optional<double> prev;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) {
        prev.reset();
        continue;
      }
      if (prev) {
        const double two_pi = 2.0 * std::numbers::pi;
        phis[i] -= two_pi * std::round((phis[i] - *prev) / two_pi);
      }
      prev = phis[i];
      out[i].phi_signed = phis[i];
    }
  }
  std::vector<double> sgrid(n);
  for (std::size_t i = 0; i < n; ++i) sgrid[i] = frenet[i].s;
  std::vector<bool> ok;
  const std::vector<double> dphi = grid_derivative(phis, grid_step(sgrid), 1, mask, ok);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i]) {
      out[i].valid = false;
      continue;
    }
    out[i].residual_tau_g = darboux[i].tau_g - (frenet[i].tau + dphi[i]);
  }
  return out;
}

KappaRelation kappa_relation(const std::vector<FrenetSample>& frenet,
                             const std::vector<DarbouxSample>& darboux, double rel_tol) {
  if (frenet.size() != darboux.size() || frenet.empty()) {
    throw Error(ErrorKind::GridMismatch, "Frenet and Darboux grids differ in size");
  }
  struct Rel {
    const char* name;
    double a, b;  // kappa^2 = a kappa_n^2 + b kappa_g^2
  };
  std::vector<Rel> rels;
  switch (darboux.front().tag) {
    case CaseTag::SS:
      rels = {{"kappa_g^2 - kappa_n^2", -1.0, 1.0}, {"kappa_n^2 - kappa_g^2", 1.0, -1.0}};
      break;
    case CaseTag::TT:
      rels = {{"kappa_n^2 + kappa_g^2", 1.0, 1.0}};
      break;
    case CaseTag::ST:
      rels = {{"kappa_n^2 + kappa_g^2", 1.0, 1.0}, {"kappa_n^2 - kappa_g^2", 1.0, -1.0}};
      break;
  }
  KappaRelation out;
  int holding = 0;
  for (const Rel& r : rels) {
    KappaRelationCandidate c;
    c.name = r.name;
    for (std::size_t i = 0; i < frenet.size(); ++i) {
      const double k2 = frenet[i].kappa * frenet[i].kappa;
      const double kn = darboux[i].kappa_n, kg = darboux[i].kappa_g;
      const double rhs = r.a * kn * kn + r.b * kg * kg;
      c.max_rel_defect = std::max(c.max_rel_defect, std::abs(k2 - rhs) / k2);
    }
    c.holds = c.max_rel_defect < rel_tol;
    if (c.holds) {
      ++holding;
      out.selected = c.name;
    }
    out.candidates.push_back(c);
  }
  if (holding != 1) out.selected.reset();
  return out;
}

FrameResiduals darboux_residuals(const std::vector<DarbouxSample>& d) {
  FrameResiduals r;
  if (d.empty()) return r;
  const auto sig = darboux_signature(d.front().tag);
  const std::size_t n = d.size();
  std::vector<LVec3> T(n), B(n), N(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DarbouxSample& x = d[i];
    T[i] = x.T;
    B[i] = x.B;
    N[i] = x.N;
    s[i] = x.s;
    const double g[6] = {mdot(x.T, x.T) - sig[0], mdot(x.B, x.B) - sig[1], mdot(x.N, x.N) - sig[2],
                         mdot(x.T, x.B), mdot(x.T, x.N), mdot(x.B, x.N)};
    for (double v : g) r.gram = std::max(r.gram, std::abs(v));
    r.cross = std::max(r.cross, max_abs_diff(x.B, mcross(x.N, x.T)));
  }
  if (n < 5) return r;
  const double ds = grid_step(s);
  const auto Tp = grid_derivative(T, ds, 1);
  const auto Bp = grid_derivative(B, ds, 1);
  const auto Np = grid_derivative(N, ds, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const DarbouxSample& x = d[i];
    const double kg = x.kappa_g, kn = x.kappa_n, tg = x.tau_g;
    LVec3 rt, rb, rn;
    switch (x.tag) {
      case CaseTag::SS:
        rt = x.B * kg + x.N * kn;
        rb = -x.T * kg + x.N * tg;
        rn = x.T * kn + x.B * tg;
        break;
      case CaseTag::TT:
        rt = x.B * kg + x.N * kn;
        rb = x.T * kg - x.N * tg;
        rn = x.T * kn + x.B * tg;
        break;
      case CaseTag::ST:
        rt = x.B * kg - x.N * kn;
        rb = x.T * kg + x.N * tg;
        rn = x.T * kn + x.B * tg;
        break;
    }
    r.ode = std::max({r.ode, max_abs_diff(Tp[i], rt), max_abs_diff(Bp[i], rb), max_abs_diff(Np[i], rn)});
  }
  return r;
}

FrameResiduals frenet_residuals(const std::vector<FrenetSample>& f) {
  FrameResiduals r;
  if (f.empty()) return r;
  const std::size_t n = f.size();
  std::vector<LVec3> T(n), nn(n), b(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FrenetSample& x = f[i];
    T[i] = x.T;
    nn[i] = x.n;
    b[i] = x.b;
    s[i] = x.s;
    const bool timelike = mdot(x.T, x.T) < 0.0;
    const double e = x.epsilon;
    const double sig[3] = {timelike ? -1.0 : 1.0, timelike ? 1.0 : e, timelike ? 1.0 : -e};
    const double g[6] = {mdot(x.T, x.T) - sig[0], mdot(x.n, x.n) - sig[1], mdot(x.b, x.b) - sig[2],
                         mdot(x.T, x.n), mdot(x.T, x.b), mdot(x.n, x.b)};
    for (double v : g) r.gram = std::max(r.gram, std::abs(v));
  }
  if (n < 5) return r;
  const double ds = grid_step(s);
  const auto Tp = grid_derivative(T, ds, 1);
  const auto np = grid_derivative(nn, ds, 1);
  const auto bp = grid_derivative(b, ds, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const FrenetSample& x = f[i];
    const bool timelike = mdot(x.T, x.T) < 0.0;
    const LVec3 rt = x.n * x.kappa;
    const LVec3 rn = timelike ? x.T * x.kappa + x.b * x.tau : x.T * (-x.epsilon * x.kappa) + x.b * x.tau;
    const LVec3 rb = timelike ? x.n * (-x.tau) : x.n * x.tau;
    r.ode = std::max({r.ode, max_abs_diff(Tp[i], rt), max_abs_diff(np[i], rn), max_abs_diff(bp[i], rb)});
  }
  return r;
}

}  // namespace rnshelix
