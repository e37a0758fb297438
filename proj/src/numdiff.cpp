#include "rnshelix/numdiff.hpp"

namespace rnshelix {

double eval_deriv(const ScalarExpr& e, const Vars& point, int order, double h, Var wrt) {
  if (h <= 0.0) throw std::invalid_argument("step h must be positive");
  auto f = [&](double x) {
    Vars at = point;
    switch (wrt) {
      case Var::S: at.s = x; break;
      case Var::U: at.u = x; break;
      case Var::V: at.v = x; break;
    }
    return e.eval(at);
  };
  const double x0 = wrt == Var::S ? point.s : wrt == Var::U ? point.u : point.v;
  return central_difference(f, x0, order, h);
}

std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][m];
  return w;
}

}  // namespace rnshelix
