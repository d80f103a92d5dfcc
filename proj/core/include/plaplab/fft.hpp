#pragma once

#include <complex>
#include <span>
#include <vector>

#include "plaplab/grid.hpp"

namespace plaplab::fft {

using Complex = std::complex<double>;

/// Forward transform of real samples, normalized so that
/// f(x) = sum_k c_k exp(2 pi i k.x) and sum |c_k|^2 = mean(f^2).
/// Layout matches the grid: index m1 + n * m2 with m in [0, n).
std::vector<Complex> forward(const Grid& grid, std::span<const double> values);

/// Inverse of forward(); returns the real part.
std::vector<double> inverse(const Grid& grid, std::span<const Complex> spectrum);

/// Shifts every grid line parallel to `axis` by its own displacement using
/// the exact Fourier phase factor: line(x) <- line(x + displacement[line]).
/// Lines are indexed by the transverse grid index (a single line for d = 1).
void shift_lines(const Grid& grid, std::span<double> values, int axis,
                 std::span<const double> displacement);

}  // namespace plaplab::fft
