#pragma once

// Composite Gauss-Legendre quadrature on [0, 1] and [0, 1]^2 with nodes from
// Newton iteration on the Legendre recurrence.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int order) {
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// Integral over [0, 1] with `panels` equal panels of an order-point rule.
template <class F>
double integrate_1d(F&& f, int panels, int order = 8) {
  const GaussRule g = gauss_legendre(order);
  double sum = 0.0;
  const double w = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < order; ++i) {
      sum += 0.5 * w * g.weights[i] * f(w * (p + 0.5 * (g.nodes[i] + 1.0)));
    }
  }
  return sum;
}

template <class F>
double integrate_2d(F&& f, int panels, int order = 8) {
  return integrate_1d([&](double y) { return integrate_1d([&](double x) { return f(x, y); }, panels, order); },
                      panels, order);
}

}  // namespace oracle
