#pragma once

#include <cmath>
#include <string_view>

namespace rnshelix {

/// Default null-cone tolerance at unit scale.
inline constexpr double kDefaultNullEps = 1e-9;

/// A vector of Minkowski 3-space. The first coordinate is the time-like one:
/// the inner product has signature (-,+,+).
struct LVec3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr LVec3& operator+=(const LVec3& o) {
    x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  constexpr LVec3& operator-=(const LVec3& o) {
    x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  constexpr LVec3& operator*=(double k) {
    x1 *= k; x2 *= k; x3 *= k;
    return *this;
  }

  friend constexpr LVec3 operator+(LVec3 a, const LVec3& b) { return a += b; }
  friend constexpr LVec3 operator-(LVec3 a, const LVec3& b) { return a -= b; }
  friend constexpr LVec3 operator-(const LVec3& a) { return {-a.x1, -a.x2, -a.x3}; }
  friend constexpr LVec3 operator*(LVec3 a, double k) { return a *= k; }
  friend constexpr LVec3 operator*(double k, LVec3 a) { return a *= k; }
  friend constexpr LVec3 operator/(const LVec3& a, double k) {
    return {a.x1 / k, a.x2 / k, a.x3 / k};
  }
  friend constexpr bool operator==(const LVec3&, const LVec3&) = default;

  bool is_finite() const {
    return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
  }
  bool is_zero() const { return x1 == 0.0 && x2 == 0.0 && x3 == 0.0; }
};

/// <x, y> = -x1 y1 + x2 y2 + x3 y3.
constexpr double mdot(const LVec3& x, const LVec3& y) {
  return -x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

/// Lorentzian cross product; satisfies <x*y, x> = <x*y, y> = 0 and
/// e1*e2 = -e3, e2*e3 = e1, e3*e1 = -e2.
constexpr LVec3 mcross(const LVec3& x, const LVec3& y) {
  return {x.x2 * y.x3 - x.x3 * y.x2,
          x.x1 * y.x3 - x.x3 * y.x1,
          x.x2 * y.x1 - x.x1 * y.x2};
}

/// Ordinary Euclidean length of the coordinate triple; used only for
/// scale estimates and convergence monitoring, never for geometry.
inline double euclidean_norm(const LVec3& v) {
  return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3);
}

/// sqrt(|<v, v>|).
inline double mnorm(const LVec3& v) { return std::sqrt(std::abs(mdot(v, v))); }

enum class Causal { Spacelike, Timelike, Lightlike };

std::string_view to_string(Causal c);

/// Spacelike iff <v,v> > eps or v = 0; Timelike iff <v,v> < -eps;
/// Lightlike otherwise.
Causal causal_character(const LVec3& v, double eps = kDefaultNullEps);

/// Scale-free variant: compares <v,v> against eps * |v|_E^2, so it depends
/// only on the direction of v. The zero vector is Spacelike.
Causal causal_direction(const LVec3& v, double eps = kDefaultNullEps);

enum class AngleKind {
  CosSpacelikePlane,  // <v,w> = |v||w| cos(a), spacelike pair in a spacelike plane
  CoshTimelikePlane,  // <v,w> = |v||w| cosh(a), spacelike pair in a timelike plane
  SinhMixed,          // <v,w> = |v||w| sinh(a), one spacelike and one timelike
  CoshSameCone,       // <v,w> = -|v||w| cosh(a), timelike pair in the same cone
};

std::string_view to_string(AngleKind k);

struct LorentzAngle {
  double value = 0.0;  // always >= 0
  AngleKind kind = AngleKind::CosSpacelikePlane;
  /// Sign of <v,w> for the kinds whose defining identity is stated on |<v,w>|
  /// (CoshTimelikePlane, SinhMixed). +1 otherwise.
  int sign = 1;
};

/// The angle between two non-null vectors, dispatched on their causal
/// characters and on the character of the plane they span (read off the
/// cross product: timelike plane <=> spacelike cross product).
///
/// Throws LightlikeInput, OppositeCone (two timelike vectors in opposite
/// cones) or DegeneratePlane (lightlike span).
LorentzAngle lorentz_angle(const LVec3& v, const LVec3& w, double eps = kDefaultNullEps);

/// The angle function of a kind: cos, cosh, sinh or -cosh.
double angle_function(AngleKind kind, double value);

/// Rebuilds <v,w> from an angle record and the two norms.
double reconstruct_inner(const LorentzAngle& a, double norm_v, double norm_w);

}  // namespace rnshelix
