#include "plaplab/eigen_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

constexpr double kFourPiSquared = 4.0 * std::numbers::pi * std::numbers::pi;

bool is_canonical(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

}  // namespace

EigenTable::EigenTable(int dim, int kmax) : dim_(dim), kmax_(kmax) {
  if (dim != 1 && dim != 2) throw DomainError("EigenTable: dimension must be 1 or 2");
  if (kmax < 1) throw DomainError("EigenTable: kmax must be positive");

  std::map<std::int64_t, std::size_t> mult;
  const int k2max = dim == 2 ? kmax : 0;
  for (int k2 = -k2max; k2 <= k2max; ++k2) {
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
      if (k1 == 0 && k2 == 0) continue;
      const std::int64_t ksq = static_cast<std::int64_t>(k1) * k1 + static_cast<std::int64_t>(k2) * k2;
      ++mult[ksq];
      if (is_canonical(k1, k2)) {
        basis_.push_back({{k1, k2}, false, ksq});
        basis_.push_back({{k1, k2}, true, ksq});
      }
    }
  }
  levels_.reserve(mult.size());
  for (const auto& [ksq, m] : mult) {
    levels_.push_back({kFourPiSquared * static_cast<double>(ksq), ksq, m});
  }
  std::sort(basis_.begin(), basis_.end(), [](const RealMode& a, const RealMode& b) {
    return std::tie(a.k_squared, a.k[0], a.k[1], a.is_sine) <
           std::tie(b.k_squared, b.k[0], b.k[1], b.is_sine);
  });
}

EigenTable::EigenTable(const Grid& grid) : EigenTable(grid.dim(), grid.n() / 2 - 1) {}

std::size_t EigenTable::counting(double lambda) const {
  std::size_t total = 0;
  for (const auto& level : levels_) {
    if (level.eigenvalue > lambda * (1.0 + 1e-14)) break;
    total += level.multiplicity;
  }
  return total;
}

std::size_t EigenTable::counting_below(double lambda) const {
  std::size_t total = 0;
  for (const auto& level : levels_) {
    if (level.eigenvalue >= lambda * (1.0 - 1e-14)) break;
    total += level.multiplicity;
  }
  return total;
}

double EigenTable::largest_not_above(double bound) const {
  double best = 0.0;
  for (const auto& level : levels_) {
    if (level.eigenvalue > bound) break;
    best = level.eigenvalue;
  }
  return best;
}

double weyl_constant(int dim, double volume, double eps) {
  if (!(eps > 0.0)) throw DomainError("weyl_constant: eps must be positive");
  if (dim < 1) throw DomainError("weyl_constant: dimension must be positive");
  const double half_d = 0.5 * dim;
  return (1.0 + eps) * volume /
         (std::pow(4.0 * std::numbers::pi, half_d) * std::tgamma(half_d + 1.0));
}

std::vector<WeylViolation> weyl_violations(const EigenTable& table, double c,
                                           std::size_t first_level, bool strict) {
  std::vector<WeylViolation> out;
  const auto& levels = table.levels();
  const double half_d = 0.5 * table.dim();
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::size_t below = cumulative;
    cumulative += levels[i].multiplicity;
    if (levels[i].k_squared > table.complete_k_squared()) break;
    if (i < first_level) continue;
    const std::size_t count = strict ? below : cumulative;
    const double bound = c * std::pow(levels[i].eigenvalue, half_d);
    if (static_cast<double>(count) > bound) {
      out.push_back({i, levels[i].eigenvalue, count, bound});
    }
  }
  return out;
}

}  // namespace plaplab
