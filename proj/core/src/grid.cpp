#include "plaplab/grid.hpp"

#include <string>

#include "plaplab/errors.hpp"

namespace plaplab {

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) {
    throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  size_ = dim == 1 ? static_cast<std::size_t>(n)
                   : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

std::array<double, 2> Grid::point(std::size_t index) const {
  if (dim_ == 1) return {coordinate(static_cast<int>(index)), 0.0};
  const auto i1 = static_cast<int>(index % static_cast<std::size_t>(n_));
  const auto i2 = static_cast<int>(index / static_cast<std::size_t>(n_));
  return {coordinate(i1), coordinate(i2)};
}

}  // namespace plaplab
