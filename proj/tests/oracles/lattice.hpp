#pragma once

// Brute-force lattice point counts for the Laplacian spectrum of the unit torus.

#include <cmath>
#include <cstdint>

namespace oracle {

/// #{k in Z^d \ {0} : |k|^2 <= m}
inline std::int64_t lattice_count(int dim, std::int64_t m) {
  const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m))) + 1;
  std::int64_t count = 0;
  const std::int64_t r2 = dim == 2 ? r : 0;
  for (std::int64_t a = -r; a <= r; ++a) {
    for (std::int64_t b = -r2; b <= r2; ++b) {
      const std::int64_t s = a * a + b * b;
      if (s > 0 && s <= m) ++count;
    }
  }
  return count;
}

/// Number of representations of m as an ordered signed sum of d squares.
inline std::int64_t representations(int dim, std::int64_t m) {
  return lattice_count(dim, m) - (m > 0 ? lattice_count(dim, m - 1) : 0);
}

}  // namespace oracle
