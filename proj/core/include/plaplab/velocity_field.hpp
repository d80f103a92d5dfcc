#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plaplab {

using Vec2 = std::array<double, 2>;
/// jacobian[i][j] = d u_i / d x_j
using Mat2 = std::array<std::array<double, 2>, 2>;

enum class FlowKind { zero, translation, steady_shear, alternating_shear, cellular };

std::string_view to_string(FlowKind kind);
FlowKind flow_kind_from_string(std::string_view name);

/// Velocity along `axis` that depends only on the transverse coordinate, so
/// every grid line parallel to `axis` moves rigidly.
struct AxisShear {
  int axis;
};

/// Closed-form divergence-free velocity fields on the unit torus.
///
///  - zero:              u = 0
///  - translation:       u = (U, 0)
///  - steady_shear:      u = (U sin 2 pi x2, 0)
///  - alternating_shear: (U sin 2 pi x2, 0) on [kT, kT + T/2),
///                       (0, U sin 2 pi x1) on [kT + T/2, (k+1)T)
///  - cellular:          u = (U sin 2 pi x1 cos 2 pi x2, -U cos 2 pi x1 sin 2 pi x2)
class VelocityField {
 public:
  static VelocityField zero(int dim = 2);
  static VelocityField translation(int dim, double amplitude);
  static VelocityField steady_shear(double amplitude);
  static VelocityField alternating_shear(double amplitude, double period);
  static VelocityField cellular(double amplitude);
  static VelocityField make(FlowKind kind, int dim, double amplitude, double period);

  FlowKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double amplitude() const { return amplitude_; }
  /// Switching period; 0 for time-independent kinds.
  double period() const { return period_; }
  bool is_zero() const { return kind_ == FlowKind::zero || amplitude_ == 0.0; }

  Vec2 velocity(double t, const Vec2& x) const;
  Mat2 jacobian(double t, const Vec2& x) const;
  double divergence(double t, const Vec2& x) const;

  /// Velocity on the smooth piece of the time axis that contains `piece_time`;
  /// used by integrators so a step that ends on a switching time keeps using
  /// the formula of its own piece.
  Vec2 velocity_on_piece(double piece_time, const Vec2& x) const;

  /// Essential sup over space-time of max_ij |d u_i / d x_j| (closed form).
  double grad_sup_norm() const;
  /// sup |u| over space-time (closed form).
  double speed_sup() const;

  /// Switching times strictly inside (s, t), ascending.
  std::vector<double> breakpoints(double s, double t) const;
  /// Shear structure on the piece containing `piece_time`, if any.
  std::optional<AxisShear> axis_shear(double piece_time) const;

 private:
  VelocityField(FlowKind kind, int dim, double amplitude, double period);
  bool first_half(double t) const;

  FlowKind kind_;
  int dim_;
  double amplitude_;
  double period_;
};

/// Max over a uniform space grid (points_per_dim^2) and `times` evenly spaced
/// times in one period of max_ij |d u_i / d x_j|.
double sampled_grad_sup(const VelocityField& u, int points_per_dim, int times);

}  // namespace plaplab
