#include "plaplab/flow_map.hpp"

#include <cmath>

#include "plaplab/errors.hpp"

namespace plaplab {

Vec2 wrap_point(Vec2 x) {
  for (double& c : x) {
    c -= std::floor(c);
    if (c >= 1.0) c = 0.0;
  }
  return x;
}

FlowMap::FlowMap(VelocityField field, double max_step) : field_(field), max_step_(max_step) {
  if (!(max_step > 0.0)) throw DomainError("FlowMap: step must be positive");
  if (field_.kind() == FlowKind::alternating_shear && max_step > field_.period() / 8.0) {
    throw DomainError("FlowMap: step " + std::to_string(max_step) +
                      " exceeds T/8 and cannot resolve the switching of the alternating shear");
  }
}

Vec2 FlowMap::integrate_piece(double lo, double hi, Vec2 x) const {
  const double length = hi - lo;
  if (!(length > 0.0)) return x;
  const double mid = 0.5 * (lo + hi);
  const auto steps = static_cast<long>(std::ceil(length / max_step_ - 1e-12));
  const double h = length / static_cast<double>(steps);
  auto add = [](const Vec2& a, double c, const Vec2& b) -> Vec2 {
    return {a[0] + c * b[0], a[1] + c * b[1]};
  };
  // Backward in physical time from hi to lo; the velocity formula is pinned
  // to this piece via its midpoint.
  for (long i = 0; i < steps; ++i) {
    const Vec2 k1 = field_.velocity_on_piece(mid, x);
    const Vec2 k2 = field_.velocity_on_piece(mid, add(x, -0.5 * h, k1));
    const Vec2 k3 = field_.velocity_on_piece(mid, add(x, -0.5 * h, k2));
    const Vec2 k4 = field_.velocity_on_piece(mid, add(x, -h, k3));
    x[0] -= h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    x[1] -= h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  return x;
}

Vec2 FlowMap::trace_unwrapped(double s, double t, Vec2 x) const {
  if (t < s) throw DomainError("FlowMap::trace requires t >= s");
  if (t == s || field_.is_zero()) return x;
  std::vector<double> cuts = field_.breakpoints(s, t);
  // Walk the pieces from t back to s.
  double hi = t;
  for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) {
    x = integrate_piece(*it, hi, x);
    hi = *it;
  }
  return integrate_piece(s, hi, x);
}

Vec2 FlowMap::trace(double s, double t, Vec2 x) const {
  return wrap_point(trace_unwrapped(s, t, x));
}

std::vector<Vec2> FlowMap::trace(double s, double t, std::span<const Vec2> points) const {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec2& x : points) out.push_back(trace(s, t, x));
  return out;
}

}  // namespace plaplab
