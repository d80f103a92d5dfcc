#include "plaplab/interpolation.hpp"

#include <cmath>
#include <numbers>

#include "plaplab/errors.hpp"
#include "plaplab/fft.hpp"

namespace plaplab {
namespace {

// Symbol of the B-spline sampled at the integers.
double bspline_symbol(int degree, int k, int n) {
  const double w = 2.0 * std::numbers::pi * k / n;
  if (degree == 3) return (4.0 + 2.0 * std::cos(w)) / 6.0;
  return (66.0 + 52.0 * std::cos(w) + 2.0 * std::cos(2.0 * w)) / 120.0;
}

}  // namespace

PeriodicSpline::PeriodicSpline(const Grid& grid, std::span<const double> values, int degree)
    : grid_(grid), degree_(degree) {
  if (degree != 3 && degree != 5) {
    throw DomainError("PeriodicSpline: only cubic and quintic interpolation are supported");
  }
  if (grid.n() < 2 * (degree + 1)) {
    throw DomainError("PeriodicSpline: degree-" + std::to_string(degree) +
                      " stencil is too wide for a grid of " + std::to_string(grid.n()) + " points");
  }
  auto spec = fft::forward(grid, values);
  const int n = grid.n();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const int m1 = static_cast<int>(i % static_cast<std::size_t>(n));
    double symbol = bspline_symbol(degree, m1, n);
    if (grid.dim() == 2) {
      const int m2 = static_cast<int>(i / static_cast<std::size_t>(n));
      symbol *= bspline_symbol(degree, m2, n);
    }
    spec[i] /= symbol;
  }
  coeffs_ = fft::inverse(grid, spec);
}

void PeriodicSpline::weights(double t, double* w) const {
  if (degree_ == 3) {
    const double s = 1.0 - t;
    w[0] = s * s * s / 6.0;
    w[1] = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
    w[2] = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
    w[3] = t * t * t / 6.0;
    return;
  }
  // Nodes at offsets -2..3 from floor(x); Horner form of beta5(t - j) * 120.
  static constexpr double c[6][6] = {
      {-1, 5, -10, 10, -5, 1},     {5, -20, 20, 20, -50, 26}, {-10, 30, 0, -60, 0, 66},
      {10, -20, -20, 20, 50, 26}, {-5, 5, 10, 10, 5, 1},     {1, 0, 0, 0, 0, 0}};
  for (int j = 0; j < 6; ++j) {
    double v = c[j][0];
    for (int m = 1; m < 6; ++m) v = v * t + c[j][m];
    w[j] = v / 120.0;
  }
}

double PeriodicSpline::operator()(const Vec2& x) const {
  const int n = grid_.n();
  const int taps = degree_ + 1;
  const int offset = degree_ == 3 ? 1 : 2;
  auto locate = [&](double coord, int& base, double& frac) {
    const double u = coord * n;
    const double fl = std::floor(u);
    frac = u - fl;
    base = static_cast<int>(static_cast<long long>(fl) % n);
    if (base < 0) base += n;
  };
  double w1[6], w2[6];
  int b1 = 0, b2 = 0;
  double f1 = 0.0, f2 = 0.0;
  locate(x[0], b1, f1);
  weights(f1, w1);
  int idx1[6];
  for (int a = 0; a < taps; ++a) idx1[a] = (b1 - offset + a + n) % n;

  if (grid_.dim() == 1) {
    double sum = 0.0;
    for (int a = 0; a < taps; ++a) sum += w1[a] * coeffs_[static_cast<std::size_t>(idx1[a])];
    return sum;
  }
  locate(x[1], b2, f2);
  weights(f2, w2);
  double sum = 0.0;
  for (int b = 0; b < taps; ++b) {
    const auto row = static_cast<std::size_t>((b2 - offset + b + n) % n) * static_cast<std::size_t>(n);
    double line = 0.0;
    for (int a = 0; a < taps; ++a) line += w1[a] * coeffs_[row + static_cast<std::size_t>(idx1[a])];
    sum += w2[b] * line;
  }
  return sum;
}

}  // namespace plaplab
