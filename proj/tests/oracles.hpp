#pragma once

// Independent reference solutions used by the unit and acceptance tests.
// Nothing here calls into the library except for the LVec3 value type.

#include <array>
#include <cmath>

#include "rnshelix/lorentz.hpp"

namespace oracle {

using Mat3 = std::array<std::array<long double, 3>, 3>;

inline Mat3 identity() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1.0L;
  return m;
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// Matrix exponential by scaling and squaring of a long Taylor series.
inline Mat3 expm(Mat3 a) {
  long double norm = 0.0L;
  for (const auto& row : a)
    for (long double x : row) norm = std::max(norm, std::fabs(x));
  int squarings = 0;
  while (norm > 0.25L) {
    norm /= 2.0L;
    ++squarings;
  }
  const long double scale = std::ldexp(1.0L, -squarings);
  for (auto& row : a)
    for (long double& x : row) x *= scale;
  Mat3 sum = identity();
  Mat3 term = identity();
  for (int n = 1; n < 30; ++n) {
    term = mul(term, a);
    for (auto& row : term)
      for (long double& x : row) x /= n;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sum[i][j] += term[i][j];
  }
  for (int i = 0; i < squarings; ++i) sum = mul(sum, sum);
  return sum;
}

// Rows are the derivative coefficients of (T, B, N) in terms of (T, B, N),
// worked out by hand from the three Darboux systems.
enum class Case { SS, ST, TT };

inline Mat3 darboux_coefficients(Case c, double kg, double kn, double tg) {
  switch (c) {
    case Case::SS:
      return Mat3{{{0, kg, kn}, {-kg, 0, tg}, {kn, tg, 0}}};
    case Case::TT:
      return Mat3{{{0, kg, kn}, {kg, 0, -tg}, {kn, tg, 0}}};
    case Case::ST:
      return Mat3{{{0, kg, -kn}, {kg, 0, tg}, {kn, tg, 0}}};
  }
  return identity();
}

struct Frame {
  rnshelix::LVec3 T, B, N;
};

// Exact frame at arc length s for constant invariants.
inline Frame constant_profile_frame(Case c, double kg, double kn, double tg, const Frame& f0,
                                    double s) {
  Mat3 a = darboux_coefficients(c, kg, kn, tg);
  for (auto& row : a)
    for (long double& x : row) x *= s;
  const Mat3 e = expm(a);
  const rnshelix::LVec3 basis[3] = {f0.T, f0.B, f0.N};
  rnshelix::LVec3 out[3];
  for (int i = 0; i < 3; ++i) {
    long double v[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      v[0] += e[i][k] * basis[k].x1;
      v[1] += e[i][k] * basis[k].x2;
      v[2] += e[i][k] * basis[k].x3;
    }
    out[i] = rnshelix::LVec3{static_cast<double>(v[0]), static_cast<double>(v[1]),
                             static_cast<double>(v[2])};
  }
  return {out[0], out[1], out[2]};
}

// Hand values used as frozen references.
inline constexpr double kSsConstantSigma = -0.28867513459481287;  // -0.5 / sqrt(3)
inline constexpr double kAtanhSigma = 0.29712035166845063;        // atanh(0.28867513459481287)
inline constexpr double kAcoth2 = 0.54930614433405489;            // 0.5 log 3

}  // namespace oracle
