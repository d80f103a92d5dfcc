#pragma once

#include <span>
#include <vector>

#include "plaplab/grid.hpp"
#include "plaplab/velocity_field.hpp"

namespace plaplab {

/// Periodic tensor-product B-spline interpolant (degree 3 or 5) of grid
/// samples. Coefficients come from an exact Fourier-space prefilter, so the
/// interpolant reproduces the samples at grid points.
class PeriodicSpline {
 public:
  PeriodicSpline(const Grid& grid, std::span<const double> values, int degree = 5);

  int degree() const { return degree_; }
  double operator()(const Vec2& x) const;

 private:
  void weights(double t, double* w) const;

  Grid grid_;
  int degree_;
  std::vector<double> coeffs_;
};

}  // namespace plaplab
