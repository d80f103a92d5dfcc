#include "plaplab/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

// Mobility as a function of |G|^2 + eps^2, specialized for the common
// exponents so the inner loops avoid pow().
struct Mobility {
  double exponent;
  int mode;  // 0: pow, 1: sqrt, 2: identity, 3: constant 1
  explicit Mobility(double p) : exponent(0.5 * (p - 2.0)) {
    if (exponent == 0.5) mode = 1;
    else if (exponent == 1.0) mode = 2;
    else if (exponent == 0.0) mode = 3;
    else mode = 0;
  }
  double operator()(double g2) const {
    switch (mode) {
      case 1: return std::sqrt(g2);
      case 2: return g2;
      case 3: return 1.0;
      default: return g2 > 0.0 ? std::pow(g2, exponent) : 0.0;
    }
  }
};

}  // namespace

PLaplacian::PLaplacian(const Grid& grid, double p, double eps_g)
    : grid_(grid), p_(p), eps_g_(eps_g) {
  if (!(p > 2.0)) throw DomainError("p-Laplacian: p must exceed 2");
  if (!(eps_g >= 0.0)) throw DomainError("p-Laplacian: regularization must be nonnegative");
  flux_x_.assign(grid.size(), 0.0);
  if (grid.dim() == 2) flux_y_.assign(grid.size(), 0.0);
}

template <bool Store>
PLaplacian::Evaluation PLaplacian::sweep(std::span<const double> values, double* fx,
                                         double* fy) const {
  if (values.size() != grid_.size()) throw DomainError("p-Laplacian: value count does not match grid");
  const Mobility mob(p_);
  const int n = grid_.n();
  const double inv_h = static_cast<double>(n);
  const double inv_4h = 0.25 * inv_h;
  const double eps2 = eps_g_ * eps_g_;
  double max_m = 0.0;
  double diss = 0.0;
  const double* v = values.data();

  if (grid_.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      const int ip = i + 1 == n ? 0 : i + 1;
      const double d = (v[ip] - v[i]) * inv_h;
      const double m = mob(d * d + eps2);
      max_m = std::max(max_m, m);
      diss += m * d * d;
      if constexpr (Store) fx[i] = m * d;
    }
    return {max_m, diss / n};
  }

  for (int j = 0; j < n; ++j) {
    const double* r0 = v + static_cast<std::size_t>(j) * n;
    const double* rm = v + static_cast<std::size_t>(j == 0 ? n - 1 : j - 1) * n;
    const double* rp = v + static_cast<std::size_t>(j + 1 == n ? 0 : j + 1) * n;
    const std::size_t row = static_cast<std::size_t>(j) * n;
    auto face_pair = [&](int im, int i, int ip) {
      // x-face between (i, j) and (i + 1, j)
      const double dx = (r0[ip] - r0[i]) * inv_h;
      const double tx = ((rp[i] - rm[i]) + (rp[ip] - rm[ip])) * inv_4h;
      const double mx = mob(dx * dx + tx * tx + eps2);
      // y-face between (i, j) and (i, j + 1)
      const double dy = (rp[i] - r0[i]) * inv_h;
      const double ty = ((r0[ip] - r0[im]) + (rp[ip] - rp[im])) * inv_4h;
      const double my = mob(dy * dy + ty * ty + eps2);
      max_m = std::max(max_m, std::max(mx, my));
      diss += mx * dx * dx + my * dy * dy;
      if constexpr (Store) {
        fx[row + i] = mx * dx;
        fy[row + i] = my * dy;
      }
    };
    face_pair(n - 1, 0, 1);
    for (int i = 1; i < n - 1; ++i) face_pair(i - 1, i, i + 1);
    face_pair(n - 2, n - 1, 0);
  }
  return {max_m, diss / static_cast<double>(grid_.size())};
}

PLaplacian::Evaluation PLaplacian::evaluate(std::span<const double> values) {
  return sweep<true>(values, flux_x_.data(), flux_y_.data());
}

double PLaplacian::dissipation(std::span<const double> values) const {
  return sweep<false>(values, nullptr, nullptr).dissipation;
}

double PLaplacian::max_mobility(std::span<const double> values) const {
  return sweep<false>(values, nullptr, nullptr).max_mobility;
}

void PLaplacian::apply(std::span<double> values, double scale) const {
  const int n = grid_.n();
  const double c = scale * static_cast<double>(n);
  const double* fx = flux_x_.data();
  double* v = values.data();
  if (grid_.dim() == 1) {
    for (int i = 0; i < n; ++i) v[i] += c * (fx[i] - fx[i == 0 ? n - 1 : i - 1]);
    return;
  }
  const double* fy = flux_y_.data();
  for (int j = 0; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * n;
    const std::size_t below = static_cast<std::size_t>(j == 0 ? n - 1 : j - 1) * n;
    for (int i = 0; i < n; ++i) {
      const int im = i == 0 ? n - 1 : i - 1;
      v[row + i] += c * ((fx[row + i] - fx[row + im]) + (fy[row + i] - fy[below + i]));
    }
  }
}

void PLaplacian::operator_into(std::span<const double> values, std::span<double> out) {
  evaluate(values);
  std::fill(out.begin(), out.end(), 0.0);
  apply(out, 1.0);
}

double diffusion_dt_limit(double spacing, int dim, double nu, double p, double max_mobility,
                          double sigma) {
  const double stiffness = 2.0 * dim * nu * (p - 1.0) * max_mobility;
  if (!(stiffness > 0.0)) return std::numeric_limits<double>::infinity();
  return sigma * spacing * spacing / stiffness;
}

}  // namespace plaplab
