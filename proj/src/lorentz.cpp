#include "rnshelix/lorentz.hpp"

#include <algorithm>

#include "rnshelix/error.hpp"

namespace rnshelix {

std::string_view to_string(Causal c) {
  switch (c) {
    case Causal::Spacelike: return "spacelike";
    case Causal::Timelike: return "timelike";
    case Causal::Lightlike: return "lightlike";
  }
  return "unknown";
}

std::string_view to_string(AngleKind k) {
  switch (k) {
    case AngleKind::CosSpacelikePlane: return "cos_spacelike_plane";
    case AngleKind::CoshTimelikePlane: return "cosh_timelike_plane";
    case AngleKind::SinhMixed: return "sinh_mixed";
    case AngleKind::CoshSameCone: return "cosh_same_cone";
  }
  return "unknown";
}

Causal causal_character(const LVec3& v, double eps) {
  if (v.is_zero()) return Causal::Spacelike;
  const double q = mdot(v, v);
  if (q > eps) return Causal::Spacelike;
  if (q < -eps) return Causal::Timelike;
  return Causal::Lightlike;
}

Causal causal_direction(const LVec3& v, double eps) {
  if (v.is_zero()) return Causal::Spacelike;
  const double e = euclidean_norm(v);
  return causal_character(v / e, eps);
}

LorentzAngle lorentz_angle(const LVec3& v, const LVec3& w, double eps) {
  const Causal cv = causal_character(v, eps);
  const Causal cw = causal_character(w, eps);
  if (v.is_zero() || w.is_zero() || cv == Causal::Lightlike || cw == Causal::Lightlike) {
    throw Error(ErrorKind::LightlikeInput, "angle needs two non-null vectors");
  }
  const double nv = mnorm(v);
  const double nw = mnorm(w);
  const double ip = mdot(v, w);
  const double ratio = ip / (nv * nw);
  const int sign = ip < 0.0 ? -1 : 1;

  if (cv == Causal::Timelike && cw == Causal::Timelike) {
    if (ip > 0.0) {
      throw Error(ErrorKind::OppositeCone, "timelike vectors lie in opposite cones");
    }
    return {std::acosh(std::max(1.0, -ratio)), AngleKind::CoshSameCone, 1};
  }
  if (cv != cw) {
    return {std::asinh(std::abs(ratio)), AngleKind::SinhMixed, sign};
  }

  // Both spacelike: the span is timelike iff the normal (cross product) is
  // spacelike. Parallel vectors give a zero cross product; both formulas
  // agree there, so the ratio decides.
  const LVec3 c = mcross(v / nv, w / nw);
  Causal plane_normal = causal_direction(c, eps);
  if (euclidean_norm(c) < 1e-12) {
    plane_normal = std::abs(ratio) <= 1.0 ? Causal::Timelike : Causal::Spacelike;
  }
  switch (plane_normal) {
    case Causal::Timelike:
      return {std::acos(std::clamp(ratio, -1.0, 1.0)), AngleKind::CosSpacelikePlane, 1};
    case Causal::Spacelike:
      return {std::acosh(std::max(1.0, std::abs(ratio))), AngleKind::CoshTimelikePlane, sign};
    case Causal::Lightlike:
      break;
  }
  throw Error(ErrorKind::DegeneratePlane, "vectors span a lightlike plane");
}

double angle_function(AngleKind kind, double value) {
  switch (kind) {
    case AngleKind::CosSpacelikePlane: return std::cos(value);
    case AngleKind::CoshTimelikePlane: return std::cosh(value);
    case AngleKind::SinhMixed: return std::sinh(value);
    case AngleKind::CoshSameCone: return -std::cosh(value);
  }
  return 0.0;
}

double reconstruct_inner(const LorentzAngle& a, double norm_v, double norm_w) {
  return a.sign * norm_v * norm_w * angle_function(a.kind, a.value);
}

}  // namespace rnshelix
