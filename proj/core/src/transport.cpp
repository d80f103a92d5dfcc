#include "plaplab/transport.hpp"

#include <string>

#include "plaplab/errors.hpp"
#include "plaplab/fft.hpp"
#include "plaplab/interpolation.hpp"

namespace plaplab {
namespace {

double resolve_step(const VelocityField& field, double requested) {
  if (requested > 0.0) return requested;
  if (field.kind() == FlowKind::alternating_shear) return field.period() / 16.0;
  return 1.0 / 64.0;
}

}  // namespace

Transporter::Transporter(const Grid& grid, VelocityField field, TransportOptions options)
    : grid_(grid), map_(field, resolve_step(field, options.trace_step)), options_(options) {
  if (field.dim() != grid.dim() && !field.is_zero()) {
    throw DomainError("transport: velocity field dimension does not match the grid");
  }
  if (options.spline_degree != 3 && options.spline_degree != 5) {
    throw DomainError("transport: interpolation degree " + std::to_string(options.spline_degree) +
                      " is not supported (use 3 or 5)");
  }
  if (grid.n() < 2 * (options.spline_degree + 1)) {
    throw DomainError("transport: interpolation degree " + std::to_string(options.spline_degree) +
                      " needs at least " + std::to_string(2 * (options.spline_degree + 1)) +
                      " points per dimension, grid has " + std::to_string(grid.n()));
  }
}

void Transporter::advance(std::vector<double>& values, double s, double t) const {
  if (t < s) throw DomainError("transport: requires t >= s");
  if (values.size() != grid_.size()) throw DomainError("transport: value count does not match grid");
  const VelocityField& field = map_.field();
  if (t == s || field.is_zero()) return;

  std::vector<double> cuts = field.breakpoints(s, t);
  cuts.insert(cuts.begin(), s);
  cuts.push_back(t);
  if (field.axis_shear(s) && !options_.force_spline) {
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k], hi = cuts[k + 1];
      shift_piece(values, lo, hi, field.axis_shear(0.5 * (lo + hi))->axis);
    }
  } else {
    // One interpolation for the whole interval keeps numerical diffusion low.
    spline_piece(values, s, t);
  }
  const double mean = sample_mean(values);
  for (double& v : values) v -= mean;
}

void Transporter::shift_piece(std::vector<double>& values, double lo, double hi, int axis) const {
  const int n = grid_.n();
  const int lines = grid_.dim() == 1 ? 1 : n;
  std::vector<double> displacement(static_cast<std::size_t>(lines));
  for (int l = 0; l < lines; ++l) {
    Vec2 x{0.0, 0.0};
    x[1 - axis] = grid_.coordinate(l);
    const Vec2 foot = map_.trace_unwrapped(lo, hi, x);
    displacement[static_cast<std::size_t>(l)] = foot[axis] - x[axis];
  }
  fft::shift_lines(grid_, values, axis, displacement);
}

void Transporter::spline_piece(std::vector<double>& values, double lo, double hi) const {
  const PeriodicSpline spline(grid_, values, options_.spline_degree);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto pt = grid_.point(i);
    values[i] = spline(map_.trace(lo, hi, Vec2{pt[0], pt[1]}));
  }
}

ScalarField transport_solve(const VelocityField& flow, const ScalarField& f0, double s, double t,
                            const TransportOptions& options) {
  if (t < s) throw DomainError("transport_solve: requires t >= s");
  const Transporter transporter(f0.grid(), flow, options);
  if (t == s || flow.is_zero()) return f0;
  std::vector<double> values(f0.values().begin(), f0.values().end());
  transporter.advance(values, s, t);
  return ScalarField::centered(f0.grid(), std::move(values));
}

}  // namespace plaplab
