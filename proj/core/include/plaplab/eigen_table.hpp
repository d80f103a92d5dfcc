#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "plaplab/grid.hpp"

namespace plaplab {

/// One real eigenfunction of -Laplace on the unit torus: sqrt(2) cos(2 pi k.x)
/// or sqrt(2) sin(2 pi k.x) for the canonical representative k of {k, -k}.
struct RealMode {
  std::array<int, 2> k{};
  bool is_sine = false;
  std::int64_t k_squared = 0;
};

/// Distinct eigenvalues 4 pi^2 |k|^2 of -Laplace on [0,1]^d over integer
/// wave vectors with |k_i| <= kmax, with multiplicities and the ordered real
/// eigenbasis. Ties are broken by lexicographic order of k, cosine first.
class EigenTable {
 public:
  struct Level {
    double eigenvalue;
    std::int64_t k_squared;
    std::size_t multiplicity;
  };

  EigenTable(int dim, int kmax);
  /// Resolved modes of the grid: |k_i| <= n/2 - 1 (Nyquist modes excluded).
  explicit EigenTable(const Grid& grid);

  int dim() const { return dim_; }
  int kmax() const { return kmax_; }
  const std::vector<Level>& levels() const { return levels_; }
  const std::vector<RealMode>& basis() const { return basis_; }

  /// Largest radius^2 for which the enumeration is complete.
  std::int64_t complete_k_squared() const {
    return static_cast<std::int64_t>(kmax_) * kmax_;
  }

  /// N(lambda) = number of eigenvalues <= lambda, counted with multiplicity.
  std::size_t counting(double lambda) const;
  /// Number of eigenvalues strictly below lambda.
  std::size_t counting_below(double lambda) const;

  double principal() const { return levels_.front().eigenvalue; }

  /// Largest tabulated eigenvalue <= bound, or 0 when bound < lambda_1.
  double largest_not_above(double bound) const;

 private:
  int dim_;
  int kmax_;
  std::vector<Level> levels_;
  std::vector<RealMode> basis_;
};

/// (1 + eps) vol / ((4 pi)^{d/2} Gamma(d/2 + 1)).
double weyl_constant(int dim, double volume, double eps);

struct WeylViolation {
  std::size_t level_index;
  double eigenvalue;
  std::size_t count;
  double bound;
};

/// Levels with index >= first_level (within the complete disc) where
/// N(lambda) > c lambda^{d/2}. `strict` counts eigenvalues strictly below.
std::vector<WeylViolation> weyl_violations(const EigenTable& table, double c,
                                           std::size_t first_level, bool strict = false);

}  // namespace plaplab
