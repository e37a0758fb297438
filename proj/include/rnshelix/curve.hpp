#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rnshelix/expr.hpp"
#include "rnshelix/lorentz.hpp"

namespace rnshelix {

/// Patch map (u, v) -> (x1, x2, x3).
struct SurfaceSpec {
  std::array<ScalarExpr, 3> x;
  std::optional<Causal> declared;  // Spacelike or Timelike surface, if stated

  LVec3 point(double u, double v) const;
  LVec3 partial_u(double u, double v, double h) const;
  LVec3 partial_v(double u, double v, double h) const;
  /// Unit normal along sigma_u x sigma_v. Throws DegenerateNormal or
  /// LightlikeNormal.
  LVec3 unit_normal(double u, double v, double h, double eps) const;
};

struct CurveSpec {
  enum class Form { OnSurface, Space };

  Form form = Form::Space;
  /// OnSurface: x[0] = u(s), x[1] = v(s). Space: the three coordinates.
  std::array<ScalarExpr, 3> x;
  double t0 = 0.0;  // parameter window
  double t1 = 1.0;
  int samples = 1001;
};

struct SampleOptions {
  double h = 1e-4;
  double eps = kDefaultNullEps;
  /// Third derivatives use h * third_order_step_factor to keep roundoff down.
  double third_order_step_factor = 10.0;
};

/// Curve sampled uniformly in arc length, with derivatives in arc length.
struct CurveTable {
  std::vector<double> s;
  std::vector<double> t;  // original parameter at each sample
  std::vector<LVec3> gamma, d1, d2, d3;
  Causal velocity = Causal::Spacelike;
  double ds = 0.0;

  /// Unit surface normal and its arc-length derivative, when a surface is known.
  std::vector<LVec3> normal, normal_prime;
  std::vector<std::array<double, 2>> uv;

  std::size_t size() const { return s.size(); }
  bool has_normal() const { return !normal.empty(); }
};

/// Unit-speed resampling of a parametrised curve. When `surf` is given the
/// unit normal field and its derivative are sampled too; a space-form curve
/// is then located on the surface by inverting the patch map.
/// Throws LightlikeVelocity, MixedCausalCharacter, CurveNotOnSurface,
/// DegenerateNormal, LightlikeNormal, EvalError.
CurveTable reparametrize_unit_speed(const CurveSpec& c, const SurfaceSpec* surf,
                                    const SampleOptions& opt = {});

}  // namespace rnshelix
