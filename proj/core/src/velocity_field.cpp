#include "plaplab/velocity_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::string_view to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::zero: return "zero";
    case FlowKind::translation: return "translation";
    case FlowKind::steady_shear: return "steady_shear";
    case FlowKind::alternating_shear: return "alternating_shear";
    case FlowKind::cellular: return "cellular";
  }
  return "unknown";
}

FlowKind flow_kind_from_string(std::string_view name) {
  for (FlowKind k : {FlowKind::zero, FlowKind::translation, FlowKind::steady_shear,
                     FlowKind::alternating_shear, FlowKind::cellular}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown flow kind '" + std::string(name) + "'");
}

VelocityField::VelocityField(FlowKind kind, int dim, double amplitude, double period)
    : kind_(kind), dim_(dim), amplitude_(amplitude), period_(period) {
  if (dim != 1 && dim != 2) throw DomainError("velocity field dimension must be 1 or 2");
  if (!std::isfinite(amplitude)) throw DomainError("velocity amplitude must be finite");
  const bool needs_2d = kind == FlowKind::steady_shear || kind == FlowKind::alternating_shear ||
                        kind == FlowKind::cellular;
  if (needs_2d && dim != 2) {
    throw DomainError("flow kind '" + std::string(to_string(kind)) + "' requires d = 2");
  }
  if (kind == FlowKind::alternating_shear && !(period > 0.0)) {
    throw DomainError("alternating shear requires a positive switching period");
  }
}

VelocityField VelocityField::zero(int dim) { return {FlowKind::zero, dim, 0.0, 0.0}; }
VelocityField VelocityField::translation(int dim, double amplitude) {
  return {FlowKind::translation, dim, amplitude, 0.0};
}
VelocityField VelocityField::steady_shear(double amplitude) {
  return {FlowKind::steady_shear, 2, amplitude, 0.0};
}
VelocityField VelocityField::alternating_shear(double amplitude, double period) {
  return {FlowKind::alternating_shear, 2, amplitude, period};
}
VelocityField VelocityField::cellular(double amplitude) {
  return {FlowKind::cellular, 2, amplitude, 0.0};
}

VelocityField VelocityField::make(FlowKind kind, int dim, double amplitude, double period) {
  if (dim != 2 && kind != FlowKind::zero && kind != FlowKind::translation) {
    throw DomainError("flow '" + std::string(to_string(kind)) + "' needs a two-dimensional torus");
  }
  switch (kind) {
    case FlowKind::zero: return zero(dim);
    case FlowKind::translation: return translation(dim, amplitude);
    case FlowKind::steady_shear: return steady_shear(amplitude);
    case FlowKind::alternating_shear: return alternating_shear(amplitude, period);
    case FlowKind::cellular: return cellular(amplitude);
  }
  throw DomainError("unknown flow kind");
}

bool VelocityField::first_half(double t) const {
  const double phase = t / period_ - std::floor(t / period_);
  return phase < 0.5;
}

Vec2 VelocityField::velocity_on_piece(double piece_time, const Vec2& x) const {
  const double U = amplitude_;
  switch (kind_) {
    case FlowKind::zero: return {0.0, 0.0};
    case FlowKind::translation: return {U, 0.0};
    case FlowKind::steady_shear: return {U * std::sin(kTwoPi * x[1]), 0.0};
    case FlowKind::alternating_shear:
      if (first_half(piece_time)) return {U * std::sin(kTwoPi * x[1]), 0.0};
      return {0.0, U * std::sin(kTwoPi * x[0])};
    case FlowKind::cellular:
      return {U * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]),
              -U * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1])};
  }
  return {0.0, 0.0};
}

Vec2 VelocityField::velocity(double t, const Vec2& x) const { return velocity_on_piece(t, x); }

Mat2 VelocityField::jacobian(double t, const Vec2& x) const {
  const double U = amplitude_;
  const double a = kTwoPi * U;
  Mat2 J{};
  switch (kind_) {
    case FlowKind::zero:
    case FlowKind::translation: break;
    case FlowKind::steady_shear: J[0][1] = a * std::cos(kTwoPi * x[1]); break;
    case FlowKind::alternating_shear:
      if (first_half(t)) {
        J[0][1] = a * std::cos(kTwoPi * x[1]);
      } else {
        J[1][0] = a * std::cos(kTwoPi * x[0]);
      }
      break;
    case FlowKind::cellular: {
      const double s1 = std::sin(kTwoPi * x[0]), c1 = std::cos(kTwoPi * x[0]);
      const double s2 = std::sin(kTwoPi * x[1]), c2 = std::cos(kTwoPi * x[1]);
      J[0][0] = a * c1 * c2;
      J[0][1] = -a * s1 * s2;
      J[1][0] = a * s1 * s2;
      J[1][1] = -a * c1 * c2;
      break;
    }
  }
  return J;
}

double VelocityField::divergence(double t, const Vec2& x) const {
  const Mat2 J = jacobian(t, x);
  return J[0][0] + J[1][1];
}

double VelocityField::grad_sup_norm() const {
  switch (kind_) {
    case FlowKind::zero:
    case FlowKind::translation: return 0.0;
    case FlowKind::steady_shear:
    case FlowKind::alternating_shear:
    case FlowKind::cellular: return kTwoPi * std::abs(amplitude_);
  }
  return 0.0;
}

double VelocityField::speed_sup() const {
  return kind_ == FlowKind::zero ? 0.0 : std::abs(amplitude_);
}

std::vector<double> VelocityField::breakpoints(double s, double t) const {
  std::vector<double> out;
  if (kind_ != FlowKind::alternating_shear || !(t > s)) return out;
  const double half = 0.5 * period_;
  for (double k = std::floor(s / half) + 1.0; k * half < t; k += 1.0) {
    const double b = k * half;
    if (b > s) out.push_back(b);
  }
  return out;
}

std::optional<AxisShear> VelocityField::axis_shear(double piece_time) const {
  switch (kind_) {
    case FlowKind::zero:
    case FlowKind::translation:
    case FlowKind::steady_shear: return AxisShear{0};
    case FlowKind::alternating_shear:
      return AxisShear{first_half(piece_time) ? 0 : 1};
    case FlowKind::cellular: return std::nullopt;
  }
  return std::nullopt;
}

double sampled_grad_sup(const VelocityField& u, int points_per_dim, int times) {
  if (points_per_dim < 1 || times < 1) throw DomainError("sampled_grad_sup: empty sample set");
  const double period = u.period() > 0.0 ? u.period() : 1.0;
  double best = 0.0;
  const int ny = u.dim() == 2 ? points_per_dim : 1;
  for (int it = 0; it < times; ++it) {
    const double t = period * it / times;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < points_per_dim; ++i) {
        const Vec2 x{static_cast<double>(i) / points_per_dim, static_cast<double>(j) / points_per_dim};
        const Mat2 J = u.jacobian(t, x);
        for (const auto& row : J) {
          for (double v : row) best = std::max(best, std::abs(v));
        }
      }
    }
  }
  return best;
}

}  // namespace plaplab
