#include "plaplab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "plaplab/errors.hpp"

namespace plaplab {

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::sine: return "sine";
    case InitialKind::random: return "random";
    case InitialKind::zero: return "zero";
  }
  return "?";
}

InitialKind initial_kind_from_string(const std::string& name) {
  if (name == "sine") return InitialKind::sine;
  if (name == "random") return InitialKind::random;
  if (name == "zero") return InitialKind::zero;
  throw DomainError("unknown initial data kind '" + name + "'");
}

ScalarField sine_mode(const Grid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::numbers::sqrt2 * std::sin(2.0 * std::numbers::pi * grid.point(i)[0]);
  }
  return ScalarField::centered(grid, std::move(v));
}

ScalarField random_band_limited(const Grid& grid, int band, std::uint64_t seed, double decay) {
  const int n = grid.n();
  if (band < 1 || band >= n / 2) {
    throw DomainError("random_band_limited: band must lie in [1, n/2)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField::Complex> spec(grid.size());
  const int k2max = grid.dim() == 2 ? band : 0;
  // Draw for canonical wave vectors in a fixed order and mirror to keep the field real.
  for (int k2 = -k2max; k2 <= k2max; ++k2) {
    for (int k1 = -band; k1 <= band; ++k1) {
      const bool canonical = k1 > 0 || (k1 == 0 && k2 > 0);
      if (!canonical) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      const double damp = std::pow(1.0 + static_cast<double>(k1 * k1 + k2 * k2), -0.5 * decay);
      const ScalarField::Complex c(damp * re, damp * im);
      auto index = [&](int a, int b) {
        const int m1 = (a + n) % n;
        const int m2 = (b + n) % n;
        return static_cast<std::size_t>(m1) + static_cast<std::size_t>(n) * static_cast<std::size_t>(m2);
      };
      spec[index(k1, k2)] = c;
      spec[index(-k1, -k2)] = std::conj(c);
    }
  }
  const ScalarField raw = ScalarField::from_spectrum(grid, std::move(spec));
  const double norm = raw.l2_norm();
  std::vector<double> v(raw.values().begin(), raw.values().end());
  for (double& x : v) x /= norm;
  return ScalarField::centered(grid, std::move(v));
}

ScalarField make_initial(const Grid& grid, const InitialSpec& spec) {
  if (!(spec.norm >= 0.0)) throw DomainError("initial data norm must be nonnegative");
  ScalarField base = ScalarField::zero(grid);
  switch (spec.kind) {
    case InitialKind::zero: return base;
    case InitialKind::sine: base = sine_mode(grid); break;
    case InitialKind::random:
      base = random_band_limited(grid, spec.band > 0 ? spec.band : grid.n() / 4, spec.seed, spec.decay);
      break;
  }
  if (spec.norm == 1.0) return base;
  std::vector<double> v(base.values().begin(), base.values().end());
  for (double& x : v) x *= spec.norm;
  return ScalarField::centered(grid, std::move(v));
}

}  // namespace plaplab
