#include "rnshelix/curve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "rnshelix/error.hpp"
#include "rnshelix/numdiff.hpp"

namespace rnshelix {

namespace {

LVec3 eval3(const std::array<ScalarExpr, 3>& x, const Vars& at) {
  return {x[0].eval(at), x[1].eval(at), x[2].eval(at)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

struct Speed {
  double v;
  int sign;  // +1 spacelike, -1 timelike, 0 lightlike
};

Speed speed_of(const LVec3& gd, double eps) {
  const double q = mdot(gd, gd);
  const double e2 = mdot(gd, gd) + 2.0 * gd.x1 * gd.x1;  // squared Euclidean norm
  if (e2 == 0.0 || std::abs(q) <= eps * e2) return {0.0, 0};
  return {std::sqrt(std::abs(q)), q > 0.0 ? 1 : -1};
}

/// Locates (u, v) with sigma(u, v) = p by Gauss-Newton from `seed`.
std::array<double, 2> invert_patch(const SurfaceSpec& surf, const LVec3& p,
                                   std::array<double, 2> uv, double h, double t) {
  for (int it = 0; it < 60; ++it) {
    const LVec3 r = p - surf.point(uv[0], uv[1]);
    const LVec3 a = surf.partial_u(uv[0], uv[1], h);
    const LVec3 b = surf.partial_v(uv[0], uv[1], h);
    auto edot = [](const LVec3& x, const LVec3& y) { return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3; };
    const double aa = edot(a, a), ab = edot(a, b), bb = edot(b, b);
    const double ra = edot(r, a), rb = edot(r, b);
    const double det = aa * bb - ab * ab;
    if (!(std::abs(det) > 1e-300)) break;
    const double du = (bb * ra - ab * rb) / det;
    const double dv = (aa * rb - ab * ra) / det;
    uv[0] += du;
    uv[1] += dv;
    if (std::abs(du) + std::abs(dv) < 1e-15 * (1.0 + std::abs(uv[0]) + std::abs(uv[1]))) break;
  }
  const double resid = euclidean_norm(p - surf.point(uv[0], uv[1]));
  if (!(resid <= 1e-8 * std::max(1.0, euclidean_norm(p)))) {
    throw Error(ErrorKind::CurveNotOnSurface,
                "curve point is " + fmt(resid) + " away from the surface", t);
  }
  return uv;
}

std::array<double, 2> coarse_seed(const SurfaceSpec& surf, const LVec3& p) {
  std::array<double, 2> best{0.0, 0.0};
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) {
      const double u = -4.0 + 0.1 * i;
      const double v = -4.0 + 0.1 * j;
      try {
        const double d = euclidean_norm(p - surf.point(u, v));
        if (d < best_d) {
          best_d = d;
          best = {u, v};
        }
      } catch (const Error&) {
      }
    }
  }
  return best;
}

}  // namespace

LVec3 SurfaceSpec::point(double u, double v) const { return eval3(x, Vars{0.0, u, v}); }

LVec3 SurfaceSpec::partial_u(double u, double v, double h) const {
  return central_difference([&](double uu) { return point(uu, v); }, u, 1, h);
}

LVec3 SurfaceSpec::partial_v(double u, double v, double h) const {
  return central_difference([&](double vv) { return point(u, vv); }, v, 1, h);
}

LVec3 SurfaceSpec::unit_normal(double u, double v, double h, double eps) const {
  const LVec3 raw = mcross(partial_u(u, v, h), partial_v(u, v, h));
  if (euclidean_norm(raw) < 1e-10) {
    throw Error(ErrorKind::DegenerateNormal,
                "surface partials are dependent at (u,v)=(" + fmt(u) + "," + fmt(v) + ")");
  }
  if (causal_direction(raw, eps) == Causal::Lightlike) {
    throw Error(ErrorKind::LightlikeNormal,
                "surface normal is lightlike at (u,v)=(" + fmt(u) + "," + fmt(v) + ")");
  }
  return raw / mnorm(raw);
}

CurveTable reparametrize_unit_speed(const CurveSpec& c, const SurfaceSpec* surf,
                                    const SampleOptions& opt) {
  if (c.form == CurveSpec::Form::OnSurface && surf == nullptr) {
    throw Error(ErrorKind::InvalidDocument, "a (u, v) curve needs a surface");
  }
  if (!(c.t1 > c.t0)) throw Error(ErrorKind::InvalidDocument, "window must satisfy s0 < s1");
  if (c.samples < 2) throw Error(ErrorKind::InvalidDocument, "at least two samples required");

  const double h = opt.h;
  const double h3 = h * opt.third_order_step_factor;

  std::function<LVec3(double)> g;
  if (c.form == CurveSpec::Form::OnSurface) {
    g = [&c, surf](double t) {
      const Vars at{t, 0.0, 0.0};
      return surf->point(c.x[0].eval(at), c.x[1].eval(at));
    };
  } else {
    g = [&c](double t) { return eval3(c.x, Vars{t, 0.0, 0.0}); };
  }

  auto velocity = [&](double t) { return central_difference(g, t, 1, h); };

  // Fine grid for arc length; Simpson per panel with the midpoint.
  const int panels = std::max(64, 8 * (c.samples - 1));
  const double dt = (c.t1 - c.t0) / panels;
  int sign = 0;
  auto checked_speed = [&](double t) {
    const Speed sp = speed_of(velocity(t), opt.eps);
    if (sp.sign == 0) {
      throw Error(ErrorKind::LightlikeVelocity, "curve velocity is lightlike at s=" + fmt(t), t);
    }
    if (sign == 0) sign = sp.sign;
    if (sp.sign != sign) {
      throw Error(ErrorKind::MixedCausalCharacter,
                  "curve velocity changes causal character at s=" + fmt(t), t);
    }
    return sp.v;
  };

  std::vector<double> cum(panels + 1, 0.0);
  std::vector<double> vnode(panels + 1);
  vnode[0] = checked_speed(c.t0);
  for (int j = 0; j < panels; ++j) {
    const double ta = c.t0 + j * dt;
    const double vm = checked_speed(ta + 0.5 * dt);
    vnode[j + 1] = checked_speed(ta + dt);
    cum[j + 1] = cum[j] + dt / 6.0 * (vnode[j] + 4.0 * vm + vnode[j + 1]);
  }
  const double length = cum.back();
  auto partial_length = [&](int j, double t) {
    const double ta = c.t0 + j * dt;
    const double w = t - ta;
    return cum[j] + w / 6.0 * (vnode[j] + 4.0 * checked_speed(ta + 0.5 * w) + checked_speed(t));
  };

  CurveTable out;
  out.velocity = sign > 0 ? Causal::Spacelike : Causal::Timelike;
  const int n = c.samples;
  out.ds = length / (n - 1);
  const bool want_normal = surf != nullptr;
  std::array<double, 2> uv_prev{0.0, 0.0};
  bool seeded = false;

  int j = 0;
  for (int i = 0; i < n; ++i) {
    const double target = out.ds * i;
    double t;
    if (i == 0) {
      t = c.t0;
    } else if (i == n - 1) {
      t = c.t1;
    } else {
      while (j < panels - 1 && cum[j + 1] <= target) ++j;
      t = c.t0 + j * dt + (target - cum[j]) / vnode[j];
      t = std::clamp(t, c.t0 + j * dt, c.t0 + (j + 1) * dt);
      for (int it = 0; it < 20; ++it) {
        const double f = partial_length(j, t) - target;
        const double step = f / checked_speed(t);
        t -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
      }
    }

    const LVec3 gd = velocity(t);
    const LVec3 gdd = central_difference(g, t, 2, h);
    const LVec3 gddd = central_difference(g, t, 3, h3);
    const double e = sign;
    const double v = std::sqrt(std::abs(mdot(gd, gd)));
    const double vd = e * mdot(gd, gdd) / v;
    const double vdd = (e * (mdot(gdd, gdd) + mdot(gd, gddd)) - vd * vd) / v;
    const double v2 = v * v, v3 = v2 * v, v4 = v3 * v, v5 = v4 * v;

    out.s.push_back(c.t0 + target);
    out.t.push_back(t);
    out.gamma.push_back(g(t));
    out.d1.push_back(gd / v);
    out.d2.push_back(gdd / v2 - gd * (vd / v3));
    out.d3.push_back(gddd / v3 - gdd * (3.0 * vd / v4) - gd * (vdd / v4) +
                     gd * (3.0 * vd * vd / v5));

    if (want_normal) {
      std::function<std::array<double, 2>(double)> uv_at;
      if (c.form == CurveSpec::Form::OnSurface) {
        uv_at = [&c](double tt) {
          const Vars at{tt, 0.0, 0.0};
          return std::array<double, 2>{c.x[0].eval(at), c.x[1].eval(at)};
        };
      } else {
        if (!seeded) {
          uv_prev = coarse_seed(*surf, g(t));
          seeded = true;
        }
        uv_prev = invert_patch(*surf, g(t), uv_prev, h, t);
        const std::array<double, 2> base = uv_prev;
        uv_at = [&, base](double tt) { return invert_patch(*surf, g(tt), base, h, tt); };
      }
      auto normal_at = [&](double tt) {
        const auto p = uv_at(tt);
        return surf->unit_normal(p[0], p[1], h, opt.eps);
      };
      out.uv.push_back(uv_at(t));
      out.normal.push_back(normal_at(t));
      out.normal_prime.push_back(central_difference(normal_at, t, 1, h) / v);
    }
  }
  return out;
}

}  // namespace rnshelix
