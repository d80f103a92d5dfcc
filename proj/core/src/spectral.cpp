#include "plaplab/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "plaplab/errors.hpp"
#include "plaplab/fft.hpp"

namespace plaplab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct WaveVector {
  int k1;
  int k2;
};

WaveVector wave_vector(const Grid& grid, std::size_t index) {
  const int n = grid.n();
  const auto m1 = static_cast<int>(index % static_cast<std::size_t>(n));
  const auto m2 = grid.dim() == 1 ? 0 : static_cast<int>(index / static_cast<std::size_t>(n));
  return {grid.wavenumber(m1), grid.dim() == 1 ? 0 : grid.wavenumber(m2)};
}

std::size_t spectral_index(const Grid& grid, int k1, int k2) {
  const int n = grid.n();
  const auto m1 = static_cast<std::size_t>((k1 + n) % n);
  const auto m2 = static_cast<std::size_t>((k2 + n) % n);
  return grid.dim() == 1 ? m1 : m1 + static_cast<std::size_t>(n) * m2;
}

}  // namespace

double sobolev_norm(const ScalarField& f, double order) {
  const Grid& grid = f.grid();
  const auto spec = f.spectrum();
  double sum = 0.0;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const auto [k1, k2] = wave_vector(grid, i);
    const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    if (ksq == 0.0) continue;
    const double lambda = kTwoPi * kTwoPi * ksq;
    sum += std::pow(lambda, order) * std::norm(spec[i]);
  }
  return std::sqrt(sum);
}

ScalarField project_low(const ScalarField& f, const EigenTable& table, std::int64_t modes) {
  if (modes < 0) throw DomainError("project_low: mode count must be nonnegative");
  const auto& basis = table.basis();
  if (static_cast<std::size_t>(modes) > basis.size()) {
    throw DomainError("project_low: mode count exceeds the truncated eigenbasis (" +
                      std::to_string(basis.size()) + ")");
  }
  const Grid& grid = f.grid();
  if (table.dim() != grid.dim() || table.kmax() > grid.n() / 2 - 1) {
    throw DomainError("project_low: eigen table does not match the grid");
  }
  const auto spec = f.spectrum();
  std::vector<ScalarField::Complex> out(spec.size(), 0.0);
  for (std::int64_t j = 0; j < modes; ++j) {
    const RealMode& mode = basis[static_cast<std::size_t>(j)];
    const std::size_t plus = spectral_index(grid, mode.k[0], mode.k[1]);
    const std::size_t minus = spectral_index(grid, -mode.k[0], -mode.k[1]);
    // f = sum over pairs of 2 Re(c_k) cos - 2 Im(c_k) sin.
    if (mode.is_sine) {
      const double im = spec[plus].imag();
      out[plus] += ScalarField::Complex(0.0, im);
      out[minus] += ScalarField::Complex(0.0, -im);
    } else {
      const double re = spec[plus].real();
      out[plus] += re;
      out[minus] += re;
    }
  }
  return ScalarField::from_spectrum(grid, std::move(out));
}

std::vector<ScalarField> gradient(const ScalarField& f) {
  const Grid& grid = f.grid();
  const auto spec = f.spectrum();
  const int n = grid.n();
  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(grid.dim()));
  for (int axis = 0; axis < grid.dim(); ++axis) {
    std::vector<ScalarField::Complex> d(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const auto [k1, k2] = wave_vector(grid, i);
      const int k = axis == 0 ? k1 : k2;
      if (k == -n / 2) continue;  // odd derivative of the Nyquist mode is not representable
      d[i] = spec[i] * ScalarField::Complex(0.0, kTwoPi * k);
    }
    out.push_back(ScalarField::from_spectrum(grid, std::move(d)));
  }
  return out;
}

namespace detail {

double grad_lp_norm_any(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("gradient Lp norm requires p >= 1");
  const auto grad = gradient(f);
  const std::size_t size = f.grid().size();
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    double g2 = 0.0;
    for (const auto& component : grad) g2 += component.values()[i] * component.values()[i];
    sum += std::pow(g2, 0.5 * p);
  }
  return std::pow(sum * f.grid().weight(), 1.0 / p);
}

}  // namespace detail

double grad_lp_norm(const ScalarField& f, double p) {
  if (!(p > 2.0)) throw DomainError("grad_lp_norm: exponent must exceed 2, got " + std::to_string(p));
  return detail::grad_lp_norm_any(f, p);
}

double high_mode_fraction(const ScalarField& f) {
  const Grid& grid = f.grid();
  const auto spec = f.spectrum();
  const int cutoff = grid.n() / 4;
  double total = 0.0;
  double high = 0.0;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const auto [k1, k2] = wave_vector(grid, i);
    const double e = std::norm(spec[i]);
    total += e;
    if (std::abs(k1) > cutoff || std::abs(k2) > cutoff) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace plaplab
