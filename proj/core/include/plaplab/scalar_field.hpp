#pragma once

#include <complex>
#include <span>
#include <vector>

#include "plaplab/grid.hpp"

namespace plaplab {

/// Mean-zero real scalar on a periodic grid together with its Fourier
/// coefficients. Immutable once built; both representations always agree.
class ScalarField {
 public:
  using Complex = std::complex<double>;

  /// Absolute tolerance (relative to the field's RMS, floored at 1) for the
  /// mean-zero check.
  static constexpr double kMeanTolerance = 1e-12;

  /// Takes samples that must already have zero mean; throws DomainError otherwise.
  static ScalarField from_values(const Grid& grid, std::vector<double> values);
  /// Subtracts the sample mean first.
  static ScalarField centered(const Grid& grid, std::vector<double> values);
  /// Builds from Fourier coefficients; the zero mode is cleared.
  static ScalarField from_spectrum(const Grid& grid, std::vector<Complex> spectrum);
  static ScalarField zero(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const Complex> spectrum() const { return spectrum_; }

  /// Grid-quadrature L2 norm.
  double l2_norm() const;
  double mean() const;

 private:
  ScalarField(Grid grid, std::vector<double> values);

  Grid grid_;
  std::vector<double> values_;
  std::vector<Complex> spectrum_;
};

/// Grid-quadrature inner product <f, g>.
double inner_product(const ScalarField& f, const ScalarField& g);

double sample_mean(std::span<const double> values);
double sample_l2(std::span<const double> values);

}  // namespace plaplab
