#pragma once

#include <array>
#include <cstddef>

namespace plaplab {

/// Uniform periodic grid on the unit torus [0,1)^d, d in {1, 2}.
///
/// Storage order is x1-fastest: index = i1 + n * i2.
class Grid {
 public:
  Grid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  std::size_t size() const { return size_; }
  /// Quadrature weight making sum(w * f * g) approximate the L2 inner product.
  double weight() const { return 1.0 / static_cast<double>(size_); }

  double coordinate(int i) const { return static_cast<double>(i) / n_; }
  std::array<double, 2> point(std::size_t index) const;

  /// Signed wave number of FFT index m in [0, n): maps to [-n/2, n/2).
  int wavenumber(int m) const { return m < n_ / 2 ? m : m - n_; }

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

}  // namespace plaplab
