#include <doctest.h>

#include <cmath>
#include <numbers>

#include "analytic_field.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"
#include "sobolev_fd.hpp"
#include "plaplab/eigen_table.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/fft.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/scalar_field.hpp"
#include "plaplab/spectral.hpp"

using namespace plaplab;
using doctest::Approx;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("spectral_core") {

TEST_CASE("grid layout and validation") {
  Grid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.spacing() == 1.0 / 16);
  CHECK(g.weight() == 1.0 / 256);
  const auto x = g.point(16 * 3 + 5);
  CHECK(x[0] == 5.0 / 16);
  CHECK(x[1] == 3.0 / 16);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(7) == 7);
  CHECK(g.wavenumber(8) == -8);
  CHECK(g.wavenumber(15) == -1);
  CHECK_THROWS_AS(Grid(3, 16), DomainError);
  CHECK_THROWS_AS(Grid(1, 12), DomainError);
  CHECK_THROWS_AS(Grid(1, 4), DomainError);
}

TEST_CASE("forward transform coefficients of a sine and round trip") {
  Grid g(1, 32);
  const ScalarField f = sine_mode(g);
  const auto c = f.spectrum();
  // sqrt(2) sin(2 pi x) = (sqrt(2)/2i) (e^{2 pi i x} - e^{-2 pi i x})
  CHECK(c[1].real() == Approx(0.0).epsilon(1e-14));
  CHECK(c[1].imag() == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c[31].imag() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  const auto back = fft::inverse(g, c);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == Approx(f.values()[i]).epsilon(1e-13));
}

TEST_CASE("Parseval on a random 2D field") {
  Grid g(2, 32);
  const auto tf = oracle::random_trig_field(2, 10, 12, 3);
  const ScalarField f = ScalarField::centered(g, tf.sample(g));
  double energy = 0.0;
  for (const auto& c : f.spectrum()) energy += std::norm(c);
  CHECK(std::sqrt(energy) == Approx(f.l2_norm()).epsilon(1e-13));
  CHECK(f.l2_norm() == Approx(tf.l2_exact()).epsilon(1e-12));
}

TEST_CASE("scalar field construction enforces zero mean") {
  Grid g(1, 8);
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK_THROWS_AS(ScalarField::from_values(g, v), DomainError);
  const ScalarField c = ScalarField::centered(g, v);
  CHECK(std::abs(c.mean()) < 1e-15);
  CHECK_THROWS_AS(ScalarField::from_values(g, std::vector<double>(7, 0.0)), DomainError);
  CHECK(ScalarField::zero(g).l2_norm() == 0.0);
}

TEST_CASE("Sobolev norms of a single eigenmode") {
  Grid g(2, 16);
  const ScalarField f = sine_mode(g);
  CHECK(sobolev_norm(f, 0.0) == Approx(1.0).epsilon(1e-13));
  CHECK(sobolev_norm(f, 1.0) == Approx(kTwoPi).epsilon(1e-13));
  CHECK(sobolev_norm(f, -1.0) == Approx(1.0 / kTwoPi).epsilon(1e-13));
  CHECK(sobolev_norm(f, 0.5) == Approx(std::sqrt(kTwoPi)).epsilon(1e-13));
}

TEST_CASE("H^1 norm agrees with Richardson-extrapolated finite differences") {
  for (int dim : {1, 2}) {
    Grid g(dim, 32);
    const auto tf = oracle::random_trig_field(dim, 6, dim == 1 ? 5 : 10, 17 + dim);
    const ScalarField f = ScalarField::centered(g, tf.sample(g));
    const double ref = oracle::h1_seminorm_richardson(tf, dim, 32, 2e-3);
    CHECK(sobolev_norm(f, 1.0) == Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("spectral gradient of a trigonometric field") {
  Grid g(2, 16);
  oracle::TrigField tf{{{1, 2, 0.7, 0.3}, {3, -1, -0.4, 1.1}}};
  const ScalarField f = ScalarField::centered(g, tf.sample(g));
  const auto grad = gradient(f);
  REQUIRE(grad.size() == 2);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const auto x = g.point(i);
    double d1 = 0.0, d2 = 0.0;
    for (const auto& w : tf.waves) {
      const double s = -w.amplitude * kTwoPi * std::sin(kTwoPi * (w.k1 * x[0] + w.k2 * x[1]) + w.phase);
      d1 += s * w.k1;
      d2 += s * w.k2;
    }
    CHECK(grad[0].values()[i] == Approx(d1).epsilon(1e-12).scale(10));
    CHECK(grad[1].values()[i] == Approx(d2).epsilon(1e-12).scale(10));
  }
}

TEST_CASE("gradient Lp norm against closed forms and quadrature") {
  Grid g1(1, 256);
  const ScalarField s = sine_mode(g1);
  const double amp = kTwoPi * std::sqrt(2.0);
  // integral of |cos 2 pi x|^3 over [0,1] is 4 / (3 pi); of cos^4 is 3/8.
  // |cos|^3 has a cubic kink at its zeros, so the grid sum converges like n^-4.
  CHECK(grad_lp_norm(s, 3.0) == Approx(amp * std::cbrt(4.0 / (3.0 * std::numbers::pi))).epsilon(1e-8));
  CHECK(grad_lp_norm(s, 4.0) == Approx(amp * std::pow(3.0 / 8.0, 0.25)).epsilon(1e-12));
  CHECK_THROWS_AS(grad_lp_norm(s, 2.0), DomainError);

  Grid g2(2, 128);
  oracle::TrigField tf{{{1, 1, 1.0, 0.0}, {2, -1, 0.5, 0.4}}};
  const ScalarField f = ScalarField::centered(g2, tf.sample(g2));
  auto integrand = [&](double x, double y) {
    double d1 = 0.0, d2 = 0.0;
    for (const auto& w : tf.waves) {
      const double sn = -w.amplitude * kTwoPi * std::sin(kTwoPi * (w.k1 * x + w.k2 * y) + w.phase);
      d1 += sn * w.k1;
      d2 += sn * w.k2;
    }
    return std::pow(d1 * d1 + d2 * d2, 1.25);
  };
  const double ref = std::pow(oracle::integrate_2d(integrand, 48), 1.0 / 2.5);
  CHECK(grad_lp_norm(f, 2.5) == Approx(ref).epsilon(1e-7));
}

TEST_CASE("eigen table multiplicities and counting against lattice enumeration") {
  EigenTable t2(2, 20);
  CHECK(t2.principal() == Approx(4.0 * std::numbers::pi * std::numbers::pi));
  const auto& lv = t2.levels();
  CHECK(lv[0].k_squared == 1);
  CHECK(lv[0].multiplicity == 4);
  CHECK(lv[1].k_squared == 2);
  CHECK(lv[1].multiplicity == 4);
  CHECK(lv[2].k_squared == 4);
  CHECK(lv[3].k_squared == 5);
  CHECK(lv[3].multiplicity == 8);
  for (const auto& level : lv) {
    if (level.k_squared > t2.complete_k_squared()) break;
    CHECK(static_cast<std::int64_t>(level.multiplicity) == oracle::representations(2, level.k_squared));
    const double lam = level.eigenvalue;
    CHECK(static_cast<std::int64_t>(t2.counting(lam)) == oracle::lattice_count(2, level.k_squared));
    CHECK(static_cast<std::int64_t>(t2.counting_below(lam)) == oracle::lattice_count(2, level.k_squared - 1));
  }
  EigenTable t1(1, 50);
  CHECK(t1.levels().size() == 50);
  CHECK(t1.counting(4.0 * std::numbers::pi * std::numbers::pi * 9.5) == 6);
  CHECK(t1.largest_not_above(1.0) == 0.0);
  CHECK(t2.largest_not_above(t2.levels()[3].eigenvalue * 1.01) == t2.levels()[3].eigenvalue);
}

TEST_CASE("ordered real eigenbasis and projection") {
  EigenTable t(2, 7);
  const auto& b = t.basis();
  REQUIRE(b.size() >= 4);
  CHECK(b[0].k == std::array<int, 2>{0, 1});
  CHECK_FALSE(b[0].is_sine);
  CHECK(b[1].is_sine);
  CHECK(b[2].k == std::array<int, 2>{1, 0});
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].k_squared <= b[i].k_squared);

  Grid g(2, 16);
  const ScalarField f = sine_mode(g);  // sin(2 pi x1): the sine member of k = (1, 0)
  const ScalarField p4 = project_low(f, t, 4);
  CHECK(p4.l2_norm() == Approx(1.0).epsilon(1e-13));
  const ScalarField p2 = project_low(f, t, 2);
  CHECK(p2.l2_norm() < 1e-14);
  CHECK_THROWS_AS(project_low(f, t, static_cast<std::int64_t>(b.size()) + 1), DomainError);
  CHECK_THROWS_AS(project_low(f, t, -1), DomainError);
}

TEST_CASE("Weyl constant and counting") {
  const double pi = std::numbers::pi;
  CHECK(weyl_constant(2, 1.0, 0.01) == Approx(1.01 / (4.0 * pi)).epsilon(1e-14));
  CHECK(weyl_constant(1, 1.0, 0.01) == Approx(1.01 / pi).epsilon(1e-14));
  CHECK_THROWS_AS(weyl_constant(2, 1.0, 0.0), DomainError);
  EigenTable t1(1, 2000);
  CHECK(weyl_violations(t1, weyl_constant(1, 1.0, 0.01), 100).empty());
  EigenTable t2(2, 60);
  CHECK(weyl_violations(t2, weyl_constant(2, 1.0, 0.01), 100, true).empty());
}

TEST_CASE("high mode fraction") {
  Grid g(1, 32);
  CHECK(high_mode_fraction(sine_mode(g)) < 1e-28);
  oracle::TrigField tf{{{1, 0, 1.0, 0.0}, {12, 0, 1.0, 0.0}}};
  const ScalarField f = ScalarField::centered(g, tf.sample(g));
  CHECK(high_mode_fraction(f) == Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE
