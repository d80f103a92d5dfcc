#pragma once

#include <cstdint>
#include <string>

#include "plaplab/scalar_field.hpp"

namespace plaplab {

enum class InitialKind { sine, random, zero };

std::string to_string(InitialKind kind);
InitialKind initial_kind_from_string(const std::string& name);

/// sqrt(2) sin(2 pi x1): a single normalized eigenmode.
ScalarField sine_mode(const Grid& grid);

/// Random real field with Fourier support max|k_i| <= band, Gaussian
/// coefficients damped by (1 + |k|^2)^{-decay/2}, scaled to unit L2 norm.
/// The same (grid, band, decay, seed) always yields the same samples.
ScalarField random_band_limited(const Grid& grid, int band, std::uint64_t seed, double decay = 1.0);

struct InitialSpec {
  InitialKind kind = InitialKind::sine;
  std::uint64_t seed = 1;
  /// 0 selects n / 4.
  int band = 0;
  double decay = 1.0;
  /// L2 norm of the result.
  double norm = 1.0;
};

ScalarField make_initial(const Grid& grid, const InitialSpec& spec);

}  // namespace plaplab
