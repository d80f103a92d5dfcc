#pragma once

#include <cstddef>
#include <span>

namespace plaplab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Coefficient of determination, clamped to [0, 1].
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  /// Half-width of the two-sided 95% confidence interval on the slope.
  double slope_ci95 = 0.0;
  std::size_t count = 0;
};

/// Ordinary least squares y = slope x + intercept; needs two distinct x values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Two-sided 97.5% Student t quantile (df >= 1).
double student_t975(std::size_t dof);

}  // namespace plaplab
