#pragma once

#include <vector>

#include "plaplab/flow_map.hpp"
#include "plaplab/scalar_field.hpp"

namespace plaplab {

struct TransportOptions {
  /// RK4 step for characteristics; 0 picks T/16 for switching flows, 1/64 otherwise.
  double trace_step = 0.0;
  /// Degree of the periodic B-spline used off the shear fast path (3 or 5).
  int spline_degree = 5;
  /// Skip the exact line-shift path for shear pieces.
  bool force_spline = false;
};

/// Semi-Lagrangian solver for the pure transport equation.
///
/// On a piece of the time axis where the field is a shear along one axis,
/// every grid line translates rigidly; the foot of one point per line gives
/// the displacement and the line is shifted by an exact Fourier phase. Other
/// pieces trace every grid point and interpolate with a periodic B-spline.
class Transporter {
 public:
  Transporter(const Grid& grid, VelocityField field, TransportOptions options = {});

  const Grid& grid() const { return grid_; }
  const FlowMap& flow_map() const { return map_; }

  /// values <- values o phi_{s,t}, re-centered to zero mean.
  void advance(std::vector<double>& values, double s, double t) const;

 private:
  void shift_piece(std::vector<double>& values, double lo, double hi, int axis) const;
  void spline_piece(std::vector<double>& values, double lo, double hi) const;

  Grid grid_;
  FlowMap map_;
  TransportOptions options_;
};

/// f0 o phi_{s,t}. Returns f0 unchanged when t == s or the flow is zero.
ScalarField transport_solve(const VelocityField& flow, const ScalarField& f0, double s, double t,
                            const TransportOptions& options = {});

}  // namespace plaplab
