#include "rnshelix/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rnshelix/error.hpp"
#include "rnshelix/numdiff.hpp"

namespace rnshelix {

namespace {

using State = std::array<LVec3, 4>;  // gamma, T, B, N

State operator+(const State& a, const State& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

State operator*(const State& a, double k) { return {a[0] * k, a[1] * k, a[2] * k, a[3] * k}; }

State rhs(CaseTag c, const State& y, double kg, double kn, double tg) {
  const LVec3& T = y[1];
  const LVec3& B = y[2];
  const LVec3& N = y[3];
  switch (c) {
    case CaseTag::SS: return {T, B * kg + N * kn, T * (-kg) + N * tg, T * kn + B * tg};
    case CaseTag::TT: return {T, B * kg + N * kn, T * kg - N * tg, T * kn + B * tg};
    case CaseTag::ST: return {T, B * kg - N * kn, T * kg + N * tg, T * kn + B * tg};
  }
  return y;
}

double gram_defect(CaseTag c, const LVec3& T, const LVec3& B, const LVec3& N) {
  const auto sig = darboux_signature(c);
  const double g[6] = {mdot(T, T) - sig[0], mdot(B, B) - sig[1], mdot(N, N) - sig[2],
                       mdot(T, B), mdot(T, N), mdot(B, N)};
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DarbouxFrame canonical_frame(CaseTag c) {
  switch (c) {
    case CaseTag::SS: return {{0, 1, 0}, {0, 0, -1}, {1, 0, 0}};
    case CaseTag::ST: return {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}};
    case CaseTag::TT: return {{1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
  }
  return {};
}

SynthesizedCurve integrate_darboux_frame(const InvariantProfile& p, const DarbouxFrame& init,
                                         const LVec3& origin) {
  if (!(p.h_int > 0.0)) throw Error(ErrorKind::DomainGuard, "integration step must be positive");
  if (!(p.s1 > p.s0)) throw Error(ErrorKind::DomainGuard, "window must satisfy s0 < s1");
  if (gram_defect(p.tag, init.T, init.B, init.N) > 1e-12) {
    throw Error(ErrorKind::BadInitialFrame, "initial frame does not have the case signature");
  }
  const LVec3 orient = init.B - mcross(init.N, init.T);
  if (euclidean_norm(orient) > 1e-12) {
    throw Error(ErrorKind::BadInitialFrame, "initial frame violates B = N x T");
  }

  const long steps = std::max(1L, std::lround((p.s1 - p.s0) / p.h_int));
  const double h = (p.s1 - p.s0) / static_cast<double>(steps);

  auto f = [&](double s, const State& y) {
    return rhs(p.tag, y, p.kappa_g.eval(s), p.kappa_n.eval(s), p.tau_g.eval(s));
  };

  SynthesizedCurve out;
  out.tag = p.tag;
  out.h_int = h;
  State y{origin, init.T, init.B, init.N};
  auto record = [&](double s) {
    out.s.push_back(s);
    out.gamma.push_back(y[0]);
    out.T.push_back(y[1]);
    out.B.push_back(y[2]);
    out.N.push_back(y[3]);
    const double drift = gram_defect(p.tag, y[1], y[2], y[3]);
    out.gram_drift = std::max(out.gram_drift, drift);
    if (drift > 1e-4) {
      throw Error(ErrorKind::StepTooLarge, "frame Gram drift " + num(drift) + " at s=" + num(s), s);
    }
  };
  record(p.s0);
  for (long i = 0; i < steps; ++i) {
    const double s = p.s0 + h * static_cast<double>(i);
    const State k1 = f(s, y);
    const State k2 = f(s + 0.5 * h, y + k1 * (0.5 * h));
    const State k3 = f(s + 0.5 * h, y + k2 * (0.5 * h));
    const State k4 = f(s + h, y + k3 * h);
    y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    record(p.s0 + h * static_cast<double>(i + 1));
  }
  return out;
}

CurveTable to_curve_table(const SynthesizedCurve& c) {
  const std::size_t n = c.s.size();
  if (n < 5) throw Error(ErrorKind::GridMismatch, "synthesized curve is too short to differentiate");
  CurveTable t;
  t.s = c.s;
  t.t = c.s;
  t.ds = c.h_int;
  t.gamma = c.gamma;
  t.d1 = c.T;
  t.d2 = grid_derivative(c.T, c.h_int, 1);
  t.d3 = grid_derivative(c.T, c.h_int, 2);
  t.normal = c.N;
  t.normal_prime = grid_derivative(c.N, c.h_int, 1);
  t.velocity = c.tag == CaseTag::TT ? Causal::Timelike : Causal::Spacelike;
  return t;
}

InvariantProfile make_rns_family(CaseTag c, Family f, const FamilyParams& p, double s0, double s1,
                                 double h_int) {
  if (p.c == 0.0) throw Error(ErrorKind::DomainGuard, "family parameter c must be non-zero");
  const std::string cs = num(p.c), ms = num(p.m), ks = num(p.k);
  InvariantProfile out;
  out.tag = c;
  out.s0 = s0;
  out.s1 = s1;
  out.h_int = h_int;
  out.kappa_n = ScalarExpr(p.k);
  switch (f) {
    case Family::F1:
      if (c != CaseTag::ST && std::abs(p.c) == std::abs(p.m)) {
        throw Error(ErrorKind::DomainGuard, "constant family needs kappa_g^2 != tau_g^2 in this case");
      }
      out.kappa_g = ScalarExpr(p.c);
      out.tau_g = ScalarExpr(p.m);
      break;
    case Family::F2:
    case Family::F2Dual: {
      if (c == CaseTag::ST) {
        throw Error(ErrorKind::DomainGuard, "hyperbolic family applies to SS and TT only");
      }
      const std::string ch = "(" + cs + ")*cosh((" + ms + ")*s)";
      const std::string sh = "(" + cs + ")*sinh((" + ms + ")*s)";
      out.kappa_g = parse_expr(f == Family::F2 ? ch : sh);
      out.tau_g = parse_expr(f == Family::F2 ? sh : ch);
      break;
    }
    case Family::F3:
      if (c != CaseTag::ST) throw Error(ErrorKind::DomainGuard, "trigonometric family applies to ST only");
      out.kappa_g = parse_expr("(" + cs + ")*cos((" + ms + ")*s)");
      out.tau_g = parse_expr("(" + cs + ")*sin((" + ms + ")*s)");
      break;
  }
  return out;
}

}  // namespace rnshelix
