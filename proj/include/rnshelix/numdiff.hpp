#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rnshelix/expr.hpp"

namespace rnshelix {

/// O(h^2) central stencils of width 2, 3 and 4 points for orders 1, 2, 3.
/// Order 0 returns f(x). Works for any value type with + - and scalar *.
template <class F>
auto central_difference(F&& f, double x, int order, double h) -> decltype(f(x)) {
  switch (order) {
    case 0: return f(x);
    case 1: return (f(x + h) - f(x - h)) * (0.5 / h);
    case 2: return (f(x + h) - f(x) * 2.0 + f(x - h)) * (1.0 / (h * h));
    case 3:
      return (f(x + 2.0 * h) - f(x + h) * 2.0 + f(x - h) * 2.0 - f(x - 2.0 * h)) *
             (0.5 / (h * h * h));
    default: throw std::invalid_argument("derivative order must be 0..3");
  }
}

/// Derivative of e with respect to `wrt` at `point`. Throws EvalError when a
/// stencil point leaves the domain.
double eval_deriv(const ScalarExpr& e, const Vars& point, int order, double h, Var wrt = Var::S);

inline double eval_deriv(const ScalarExpr& e, double s, int order, double h) {
  return eval_deriv(e, Vars{s, 0.0, 0.0}, order, h, Var::S);
}

/// Finite-difference weights for derivative `m` at `z` from nodes `x`
/// (Fornberg's recursion). Returns weights for derivative order m only.
std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m);

/// Derivative of order 1 or 2 of uniformly spaced samples. Only samples with
/// mask[i] set are used; stencils never straddle a masked sample. Five-point
/// stencils are used where the run allows (central inside, one-sided at run
/// ends); shorter runs fall back to what fits. ok[i] is cleared where fewer
/// than order+1 contiguous valid samples exist.
template <class V>
std::vector<V> grid_derivative(const std::vector<V>& y, double ds, int order,
                               const std::vector<bool>& mask, std::vector<bool>& ok) {
  const std::size_t n = y.size();
  std::vector<V> out(n, y.empty() ? V{} : y[0] * 0.0);
  ok.assign(n, false);
  std::size_t i = 0;
  while (i < n) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && mask[j]) ++j;
    // Run [i, j).
    const std::size_t len = j - i;
    const std::size_t width = std::min<std::size_t>(5, len);
    if (width >= static_cast<std::size_t>(order) + 1) {
      for (std::size_t k = i; k < j; ++k) {
        std::size_t start = k >= width / 2 ? k - width / 2 : 0;
        start = std::max(start, i);
        if (start + width > j) start = j - width;
        std::vector<double> nodes(width);
        for (std::size_t q = 0; q < width; ++q) {
          nodes[q] = static_cast<double>(start + q) - static_cast<double>(k);
        }
        const std::vector<double> w = fornberg_weights(0.0, nodes, order);
        V acc = y[start] * w[0];
        for (std::size_t q = 1; q < width; ++q) acc += y[start + q] * w[q];
        double scale = 1.0;
        for (int o = 0; o < order; ++o) scale /= ds;
        out[k] = acc * scale;
        ok[k] = true;
      }
    }
    i = j;
  }
  return out;
}

template <class V>
std::vector<V> grid_derivative(const std::vector<V>& y, double ds, int order) {
  std::vector<bool> ok;
  return grid_derivative(y, ds, order, std::vector<bool>(y.size(), true), ok);
}

}  // namespace rnshelix
