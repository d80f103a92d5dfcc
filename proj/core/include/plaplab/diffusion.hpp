#pragma once

#include <span>
#include <vector>

#include "plaplab/grid.hpp"

namespace plaplab {

/// Conservative finite-volume discretization of div(|grad f|^{p-2} grad f).
///
/// Each face carries the normal difference D and a transverse gradient taken
/// as the average of the centered differences in the two adjacent cells. The
/// face mobility is (D^2 + T^2 + eps^2)^{(p-2)/2}. The discrete dissipation
/// mean_faces(mobility * D^2) (summed over directions) satisfies
/// <f, L f> = -dissipation(f) exactly, so the discrete energy identity has no
/// spatial error.
class PLaplacian {
 public:
  PLaplacian(const Grid& grid, double p, double eps_g = 0.0);

  const Grid& grid() const { return grid_; }
  double p() const { return p_; }
  double eps_g() const { return eps_g_; }

  struct Evaluation {
    double max_mobility;
    double dissipation;
  };

  /// Computes and stores the face fluxes of `values`.
  Evaluation evaluate(std::span<const double> values);
  /// values += scale * div(flux) using the stored fluxes.
  void apply(std::span<double> values, double scale) const;
  /// L(values) into `out` (evaluates fluxes).
  void operator_into(std::span<const double> values, std::span<double> out);

  double dissipation(std::span<const double> values) const;
  double max_mobility(std::span<const double> values) const;

 private:
  template <bool Store>
  Evaluation sweep(std::span<const double> values, double* fx, double* fy) const;

  Grid grid_;
  double p_;
  double eps_g_;
  std::vector<double> flux_x_;
  std::vector<double> flux_y_;
};

/// Explicit stability step for the degenerate diffusion:
/// sigma h^2 / (2 d nu (p - 1) max_mobility). Infinite when nu * max_mobility = 0.
double diffusion_dt_limit(double spacing, int dim, double nu, double p, double max_mobility,
                          double sigma);

}  // namespace plaplab
