#pragma once

#include <span>
#include <vector>

#include "plaplab/velocity_field.hpp"

namespace plaplab {

/// Flow map phi_{s,t} of a velocity field, integrated with classical RK4.
///
/// trace(s, t, x) returns the foot of the characteristic through x at time t,
/// obtained by integrating d phi / d sigma = -u(t - sigma, phi) for sigma in
/// [0, t - s]. Composing initial data with this map solves the transport
/// equation: f(t, x) = f0(trace(s, t, x)). Steps never straddle a switching
/// time of the field, so piecewise-steady shears are integrated exactly.
class FlowMap {
 public:
  FlowMap(VelocityField field, double max_step);

  const VelocityField& field() const { return field_; }
  double max_step() const { return max_step_; }

  Vec2 trace(double s, double t, Vec2 x) const;
  std::vector<Vec2> trace(double s, double t, std::span<const Vec2> points) const;

  /// Unwrapped variant: positions are not reduced mod 1.
  Vec2 trace_unwrapped(double s, double t, Vec2 x) const;

 private:
  Vec2 integrate_piece(double lo, double hi, Vec2 x) const;

  VelocityField field_;
  double max_step_;
};

Vec2 wrap_point(Vec2 x);

}  // namespace plaplab
