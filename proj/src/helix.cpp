#include "rnshelix/helix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rnshelix/numdiff.hpp"

namespace rnshelix {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double grid_step(const std::vector<DarbouxSample>& d) {
  if (d.size() < 2) throw Error(ErrorKind::EmptyValidGrid, "need at least two samples");
  return (d.back().s - d.front().s) / static_cast<double>(d.size() - 1);
}

double radicand(const DarbouxSample& x) {
  const double g2 = x.kappa_g * x.kappa_g;
  const double t2 = x.tau_g * x.tau_g;
  return x.tag == CaseTag::ST ? g2 + t2 : g2 - t2;
}

bool radicand_fits(Kernel k, double r, double scale, double rel) {
  const double thr = rel * scale;
  switch (k) {
    case Kernel::SSHyperbolic: return r > thr;
    case Kernel::SSCircular: return r < -thr;
    case Kernel::STHyperbolic: return r > thr;
    case Kernel::TTHyperbolic: return r < -thr;
    case Kernel::TTCircular: return r > thr;
  }
  return false;
}

std::vector<Kernel> kernels_for(CaseTag c) {
  switch (c) {
    case CaseTag::SS: return {Kernel::SSHyperbolic, Kernel::SSCircular};
    case CaseTag::ST: return {Kernel::STHyperbolic};
    case CaseTag::TT: return {Kernel::TTHyperbolic, Kernel::TTCircular};
  }
  return {};
}

AngleKind angle_kind(Kernel k, AxisForm f) {
  if (f == AxisForm::Cot) return AngleKind::CosSpacelikePlane;
  if (f == AxisForm::Tanh) return AngleKind::SinhMixed;
  return kernel_case(k) == CaseTag::ST ? AngleKind::CoshSameCone : AngleKind::CoshTimelikePlane;
}

Causal axis_character(Kernel k, AxisForm f) {
  if (f == AxisForm::Cot) return Causal::Spacelike;
  const bool st = kernel_case(k) == CaseTag::ST;
  if (f == AxisForm::Coth) return st ? Causal::Timelike : Causal::Spacelike;
  return st ? Causal::Spacelike : Causal::Timelike;
}

std::string case_prefix(CaseTag c) {
  switch (c) {
    case CaseTag::SS: return "ss_";
    case CaseTag::ST: return "st_";
    case CaseTag::TT: return "tt_";
  }
  return "";
}

double cot_angle(double c, int candidate) { return std::atan2(1.0, candidate == 0 ? c : -c); }

}  // namespace

std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::SSHyperbolic: return "ss_hyperbolic";
    case Kernel::SSCircular: return "ss_circular";
    case Kernel::STHyperbolic: return "st_hyperbolic";
    case Kernel::TTHyperbolic: return "tt_hyperbolic";
    case Kernel::TTCircular: return "tt_circular";
  }
  return "?";
}

CaseTag kernel_case(Kernel k) {
  switch (k) {
    case Kernel::SSHyperbolic:
    case Kernel::SSCircular: return CaseTag::SS;
    case Kernel::STHyperbolic: return CaseTag::ST;
    case Kernel::TTHyperbolic:
    case Kernel::TTCircular: return CaseTag::TT;
  }
  return CaseTag::SS;
}

bool is_circular(Kernel k) { return k == Kernel::SSCircular || k == Kernel::TTCircular; }

std::string_view to_string(AxisForm f) {
  switch (f) {
    case AxisForm::Coth: return "coth";
    case AxisForm::Tanh: return "tanh";
    case AxisForm::Cot: return "cot";
  }
  return "?";
}

std::vector<SigmaSeries> sigma_rns(const std::vector<DarbouxSample>& darboux, const MaskOptions& opt) {
  const std::size_t n = darboux.size();
  const double ds = grid_step(darboux);
  const CaseTag tag = darboux.front().tag;

  double max_kg = 0.0;
  for (const auto& x : darboux) max_kg = std::max(max_kg, std::abs(x.kappa_g));
  if (max_kg < 1e-7) {
    throw Error(ErrorKind::VanishingKappaG, "geodesic curvature vanishes on the whole grid",
                darboux.front().s);
  }
  const double kg_floor = std::max(opt.kappa_g_rel * max_kg, 1e-12);

  std::vector<SigmaSeries> out;
  for (Kernel k : kernels_for(tag)) {
    SigmaSeries ser;
    ser.kernel = k;
    ser.formula_id = std::string(to_string(k));
    ser.s.resize(n);
    ser.sigma.assign(n, 0.0);
    std::vector<bool> mask(n, false);
    std::vector<double> ratio(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const DarbouxSample& x = darboux[i];
      ser.s[i] = x.s;
      const double r = radicand(x);
      const double scale = x.kappa_g * x.kappa_g + x.tau_g * x.tau_g;
      if (std::abs(x.kappa_g) > kg_floor && radicand_fits(k, r, scale, opt.radicand_rel)) {
        mask[i] = true;
        ratio[i] = x.tau_g / x.kappa_g;
      }
    }
    std::vector<bool> ok;
    const std::vector<double> dratio = grid_derivative(ratio, ds, 1, mask, ok);
    ser.valid = ok;
    for (std::size_t i = 0; i < n; ++i) {
      if (!ok[i]) continue;
      const DarbouxSample& x = darboux[i];
      const double r = radicand(x);
      const double w = x.kappa_g * x.kappa_g * dratio[i];
      ser.sigma[i] = (w - x.kappa_n * r) / std::pow(std::abs(r), 1.5);
      ++ser.valid_count;
    }
    if (ser.valid_count == 0) continue;
    ser.masked_fraction = 1.0 - static_cast<double>(ser.valid_count) / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ser.valid[i]) sum += ser.sigma[i];
    }
    ser.mean = sum / static_cast<double>(ser.valid_count);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ser.valid[i]) var += (ser.sigma[i] - ser.mean) * (ser.sigma[i] - ser.mean);
    }
    ser.std_dev = std::sqrt(var / static_cast<double>(ser.valid_count));
    ser.rel_std = ser.std_dev / std::max(std::abs(ser.mean), 1e-12);
    ser.score = ser.std_dev / std::max(std::abs(ser.mean), 1.0);
    out.push_back(std::move(ser));
  }
  if (out.empty()) {
    throw Error(ErrorKind::EmptyValidGrid, "no characterisation kernel has a valid sample");
  }
  return out;
}

std::vector<DarbouxSample> pseudo_darboux(const std::vector<FrenetSample>& frenet) {
  std::vector<DarbouxSample> out;
  if (frenet.empty()) return out;
  const bool timelike = mdot(frenet.front().T, frenet.front().T) < 0.0;
  const int eps = frenet.front().epsilon;
  out.reserve(frenet.size());
  for (const FrenetSample& f : frenet) {
    if (f.epsilon != eps) {
      throw Error(ErrorKind::MixedCausalCharacter,
                  "principal normal changes causal character at s=" + fmt(f.s), f.s);
    }
    DarbouxSample d;
    d.s = f.s;
    d.T = f.T;
    d.B = f.n;
    d.N = f.b;
    d.kappa_g = f.kappa;
    d.kappa_n = 0.0;
    d.tau_g = timelike ? -f.tau : f.tau;
    d.tag = timelike ? CaseTag::TT : (eps > 0 ? CaseTag::SS : CaseTag::ST);
    out.push_back(d);
  }
  return out;
}

std::vector<SigmaSeries> sigma_slant(const std::vector<FrenetSample>& frenet, const MaskOptions& opt) {
  auto series = sigma_rns(pseudo_darboux(frenet), opt);
  for (auto& s : series) s.formula_id = "slant_" + s.formula_id;
  return series;
}

Detection detect_rns_helix(const std::vector<SigmaSeries>& series, double tol) {
  Detection det;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const SigmaSeries& s = series[i];
    if (s.valid_count == 0 || !(s.score < tol)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const SigmaSeries& b = series[*best];
    const bool tie = std::abs(s.score - b.score) <= 1e-15;
    if (s.score < b.score && !tie) best = i;
    if (tie && is_circular(b.kernel) && !is_circular(s.kernel)) best = i;
  }
  if (!best) {
    double min_score = std::numeric_limits<double>::infinity();
    for (const auto& s : series) min_score = std::min(min_score, s.score);
    det.detail = "no constant series (smallest score " + fmt(min_score) + ")";
    return det;
  }
  const SigmaSeries& s = series[*best];
  det.series = best;
  det.constant = s.mean;
  const std::string prefix =
      (s.formula_id.rfind("slant_", 0) == 0 ? "slant_" : "") + case_prefix(kernel_case(s.kernel));
  const double c = s.mean;
  AxisForm form;
  double value;
  if (is_circular(s.kernel)) {
    form = AxisForm::Cot;
    value = cot_angle(c, 0);
  } else {
    const double a = std::abs(c);
    if (std::abs(a - 1.0) <= std::max(s.std_dev, 1e-12)) {
      det.error = ErrorKind::AmbiguousAngle;
      det.formula = prefix + "coth|tanh";
      det.detail = "constant " + fmt(c) + " has unit modulus; no hyperbolic angle";
      return det;
    }
    if (a > 1.0) {
      form = AxisForm::Coth;
      value = 0.5 * std::log((a + 1.0) / (a - 1.0));
    } else {
      form = AxisForm::Tanh;
      value = std::atanh(a);
    }
  }
  det.verdict = true;
  det.form = form;
  det.formula = prefix + std::string(to_string(form));
  det.angle = LorentzAngle{value, angle_kind(s.kernel, form), 1};
  det.detail = "constant " + fmt(c) + " from " + s.formula_id;
  return det;
}

AxisResult axis_rns(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series,
                    AxisForm form, double angle, int branch, int candidate) {
  const std::size_t n = darboux.size();
  if (series.sigma.size() != n) throw Error(ErrorKind::GridMismatch, "series and frame grids differ");
  const Kernel k = series.kernel;
  const CaseTag tag = kernel_case(k);
  const auto sig = darboux_signature(tag);
  double cb = 0.0, aux = 0.0;
  switch (form) {
    case AxisForm::Coth:
      cb = tag == CaseTag::ST ? -std::cosh(angle) : std::cosh(angle);
      aux = std::sinh(angle);
      break;
    case AxisForm::Tanh:
      cb = std::sinh(angle);
      aux = std::cosh(angle);
      break;
    case AxisForm::Cot:
      cb = std::cos(angle);
      aux = std::sin(angle);
      break;
  }
  const double tsign = tag == CaseTag::ST ? -1.0 : 1.0;

  AxisResult res;
  res.form = form;
  res.branch = branch;
  res.candidate = candidate;
  res.d_character = axis_character(k, form);
  res.angle = LorentzAngle{angle, angle_kind(k, form), 1};
  res.s.resize(n);
  res.per_sample.assign(n, LVec3{});
  res.valid = series.valid;

  std::size_t count = 0;
  LVec3 sum;
  for (std::size_t i = 0; i < n; ++i) {
    res.s[i] = darboux[i].s;
    if (!series.valid[i]) continue;
    const DarbouxSample& x = darboux[i];
    const double r = radicand(x);
    if (!radicand_fits(k, r, 0.0, 0.0)) {
      throw Error(ErrorKind::RadicandViolation, "radicand has the wrong sign at s=" + fmt(x.s), x.s);
    }
    const double root = std::sqrt(std::abs(r));
    const double nd = branch * x.kappa_g * aux / root;
    const double td = tsign * branch * x.tau_g * aux / root;
    const LVec3 d = x.T * (td / sig[0]) + x.B * (cb / sig[1]) + x.N * (nd / sig[2]);
    res.per_sample[i] = d;
    sum += d;
    ++count;
  }
  if (count == 0) throw Error(ErrorKind::EmptyValidGrid, "axis has no valid sample");
  res.d = sum / static_cast<double>(count);

  const double target = res.d_character == Causal::Timelike ? -1.0 : 1.0;
  res.gram_residual = std::abs(mdot(res.d, res.d) - target);
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -bmin;
  for (std::size_t i = 0; i < n; ++i) {
    if (!series.valid[i]) continue;
    res.constancy_residual = std::max(res.constancy_residual, euclidean_norm(res.per_sample[i] - res.d));
    const double ib = mdot(darboux[i].B, res.d);
    bmin = std::min(bmin, ib);
    bmax = std::max(bmax, ib);
    res.angle_mismatch = std::max(res.angle_mismatch, std::abs(ib - cb));
    res.max_inner_T = std::max(res.max_inner_T, std::abs(mdot(darboux[i].T, res.d)));
    res.max_inner_N = std::max(res.max_inner_N, std::abs(mdot(darboux[i].N, res.d)));
  }
  res.inner_B_spread = bmax - bmin;
  std::vector<bool> ok;
  const auto dprime = grid_derivative(res.per_sample, grid_step(darboux), 1, series.valid, ok);
  for (std::size_t i = 0; i < n; ++i) {
    if (ok[i]) res.max_derivative = std::max(res.max_derivative, euclidean_norm(dprime[i]));
  }
  return res;
}

AxisResult best_axis(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series,
                     const Detection& det) {
  if (!det.verdict || !det.form || !det.angle) {
    throw Error(ErrorKind::EmptyValidGrid, "no detection to build an axis from");
  }
  std::optional<AxisResult> best;
  std::vector<BranchResidual> all;
  const int candidates = *det.form == AxisForm::Cot ? 2 : 1;
  for (int cand = 0; cand < candidates; ++cand) {
    const double angle = *det.form == AxisForm::Cot ? cot_angle(det.constant, cand) : det.angle->value;
    for (int branch : {1, -1}) {
      AxisResult r = axis_rns(darboux, series, *det.form, angle, branch, cand);
      all.push_back({branch, cand, angle, r.constancy_residual});
      if (!best || r.constancy_residual < best->constancy_residual) best = std::move(r);
    }
  }
  best->branches = std::move(all);
  return *best;
}

double indicatrix_defect(const std::vector<DarbouxSample>& darboux, const SigmaSeries& series) {
  const std::size_t n = darboux.size();
  std::vector<LVec3> B(n);
  for (std::size_t i = 0; i < n; ++i) B[i] = darboux[i].B;
  const double ds = grid_step(darboux);
  std::vector<bool> ok1, ok2;
  const auto b1 = grid_derivative(B, ds, 1, series.valid, ok1);
  const auto b2 = grid_derivative(B, ds, 2, series.valid, ok2);
  const double shift = is_circular(series.kernel) ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok1[i] || !ok2[i] || !series.valid[i]) continue;
    const double speed2 = std::abs(mdot(b1[i], b1[i]));
    if (speed2 < 1e-12) continue;
    const LVec3 c = mcross(b1[i], b2[i]);
    const double kbar2 = std::abs(mdot(c, c)) / (speed2 * speed2 * speed2);
    const double sg = series.sigma[i];
    worst = std::max(worst, std::abs(kbar2 - std::abs(sg * sg + shift)));
  }
  return worst;
}

SpecialFlags classify_special(const std::vector<DarbouxSample>& darboux, double tol) {
  double kg = 0.0, kn = 0.0, tg = 0.0;
  for (const auto& x : darboux) {
    kg = std::max(kg, std::abs(x.kappa_g));
    kn = std::max(kn, std::abs(x.kappa_n));
    tg = std::max(tg, std::abs(x.tau_g));
  }
  return {kg < tol, kn < tol, tg < tol};
}

std::vector<PropositionResult> check_propositions(const HelixReport& report,
                                                  const std::vector<FrenetSample>* frenet,
                                                  const std::vector<DarbouxSample>& darboux,
                                                  const HelixOptions& opt) {
  (void)darboux;
  std::vector<PropositionResult> out;
  const bool spacelike_curve = report.tag != CaseTag::TT;
  const AxisResult* axis = report.axis ? &*report.axis : nullptr;
  const bool rns = report.rns.verdict && axis != nullptr;

  {
    PropositionResult p{"asymptotic_rns_iff_slant", false, true, ""};
    if (report.flags.asymptotic && report.slant && !report.slant->error) {
      p.applicable = true;
      const bool slant = report.slant->detection.verdict && report.slant->axis;
      if (rns != slant) {
        p.passed = false;
        p.detail = std::string("relative helix ") + (rns ? "detected" : "not detected") +
                   " but slant helix " + (slant ? "detected" : "not detected");
      } else if (rns) {
        const LVec3 a = axis->d, b = report.slant->axis->d;
        const double gap = std::min(euclidean_norm(a - b), euclidean_norm(a + b));
        p.passed = gap < opt.axis_agree;
        p.detail = "axis gap " + fmt(gap);
      } else {
        p.detail = "neither detector fires";
      }
    }
    out.push_back(p);
  }
  {
    PropositionResult p{"rns_not_line_of_curvature", false, true, ""};
    if (rns && ((spacelike_curve && axis->d_character == Causal::Spacelike) ||
                (!spacelike_curve && axis->d_character == Causal::Timelike))) {
      p.applicable = true;
      p.passed = !report.flags.line_of_curvature;
      p.detail = report.flags.line_of_curvature ? "helix is a line of curvature" : "tau_g does not vanish";
    }
    out.push_back(p);
  }
  {
    PropositionResult p{"timelike_axis_line_of_curvature_is_planar", false, true, ""};
    if (rns && spacelike_curve && axis->d_character == Causal::Timelike &&
        report.flags.line_of_curvature && frenet != nullptr) {
      p.applicable = true;
      double tmax = 0.0;
      for (const auto& f : *frenet) tmax = std::max(tmax, std::abs(f.tau));
      p.passed = tmax < opt.prop_tol;
      p.detail = "max |tau| " + fmt(tmax);
    }
    out.push_back(p);
  }
  {
    PropositionResult p{"st_spacelike_axis_not_orthogonal_to_T", false, true, ""};
    if (rns && report.tag == CaseTag::ST && axis->form == AxisForm::Tanh) {
      p.applicable = true;
      p.passed = axis->max_inner_T > opt.prop_tol;
      p.detail = "max |<T,d>| " + fmt(axis->max_inner_T);
    }
    out.push_back(p);
  }
  {
    PropositionResult p{"ss_timelike_axis_not_orthogonal_to_N", false, true, ""};
    if (rns && report.tag == CaseTag::SS && axis->form == AxisForm::Tanh) {
      p.applicable = true;
      p.passed = axis->max_inner_N > opt.prop_tol;
      p.detail = "max |<N,d>| " + fmt(axis->max_inner_N);
    }
    out.push_back(p);
  }
  {
    PropositionResult p{"tt_timelike_axis_tangent_and_normal", false, true, ""};
    if (rns && report.tag == CaseTag::TT && axis->form == AxisForm::Tanh) {
      p.applicable = true;
      const bool n_orth = axis->max_inner_N < opt.prop_tol;
      p.passed = axis->max_inner_T > opt.prop_tol && n_orth == report.flags.geodesic;
      p.detail = "max |<T,d>| " + fmt(axis->max_inner_T) + ", max |<N,d>| " + fmt(axis->max_inner_N);
    }
    out.push_back(p);
  }
  return out;
}

SlantResult analyze_slant(const std::vector<FrenetSample>& frenet, const HelixOptions& opt) {
  SlantResult sl;
  try {
    const auto pseudo = pseudo_darboux(frenet);
    sl.sigma = sigma_slant(frenet, opt.mask);
    sl.detection = detect_rns_helix(sl.sigma, opt.tol);
    if (sl.detection.verdict) sl.axis = best_axis(pseudo, sl.sigma[*sl.detection.series], sl.detection);
  } catch (const Error& e) {
    sl.error = e.what();
  }
  return sl;
}

HelixReport analyze_helix(const std::vector<DarbouxSample>& darboux,
                          const std::vector<FrenetSample>* frenet, const HelixOptions& opt) {
  HelixReport rep;
  if (darboux.empty()) throw Error(ErrorKind::EmptyValidGrid, "no samples");
  rep.tag = darboux.front().tag;
  rep.flags = classify_special(darboux, opt.special_tol);
  try {
    rep.sigma = sigma_rns(darboux, opt.mask);
  } catch (const Error& e) {
    rep.sigma_error = e.what();
  }
  if (!rep.sigma.empty()) {
    rep.rns = detect_rns_helix(rep.sigma, opt.tol);
    if (rep.rns.verdict) {
      const SigmaSeries& s = rep.sigma[*rep.rns.series];
      rep.axis = best_axis(darboux, s, rep.rns);
      rep.indicatrix = indicatrix_defect(darboux, s);
    }
  } else {
    rep.rns.detail = rep.sigma_error.value_or("no series");
  }
  if (frenet != nullptr) rep.slant = analyze_slant(*frenet, opt);
  rep.propositions = check_propositions(rep, frenet, darboux, opt);
  return rep;
}

}  // namespace rnshelix
