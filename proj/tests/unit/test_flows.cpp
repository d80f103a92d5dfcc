#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shear_map.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/flow_map.hpp"
#include "plaplab/velocity_field.hpp"

using namespace plaplab;
using doctest::Approx;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double torus_distance(const Vec2& a, const Vec2& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    double d = std::abs(a[i] - b[i]);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}
}  // namespace

TEST_SUITE("flows") {

TEST_CASE("closed-form velocities") {
  const Vec2 x{0.1, 0.3};
  const auto sh = VelocityField::steady_shear(2.0);
  CHECK(sh.velocity(0.0, x)[0] == Approx(2.0 * std::sin(kTwoPi * 0.3)));
  CHECK(sh.velocity(0.0, x)[1] == 0.0);
  const auto alt = VelocityField::alternating_shear(1.0, 1.0);
  CHECK(alt.velocity(0.2, x)[0] == Approx(std::sin(kTwoPi * 0.3)));
  CHECK(alt.velocity(0.7, x)[0] == 0.0);
  CHECK(alt.velocity(0.7, x)[1] == Approx(std::sin(kTwoPi * 0.1)));
  CHECK(alt.velocity(1.2, x)[0] == Approx(std::sin(kTwoPi * 0.3)));
  const auto cell = VelocityField::cellular(1.0);
  CHECK(cell.velocity(0.0, x)[0] == Approx(std::sin(kTwoPi * 0.1) * std::cos(kTwoPi * 0.3)));
  CHECK(cell.velocity(0.0, x)[1] == Approx(-std::cos(kTwoPi * 0.1) * std::sin(kTwoPi * 0.3)));
  CHECK(VelocityField::translation(2, 0.5).velocity(3.0, x)[0] == 0.5);
  CHECK(VelocityField::zero().is_zero());
}

TEST_CASE("divergence free and Jacobian against finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (FlowKind k : {FlowKind::steady_shear, FlowKind::alternating_shear, FlowKind::cellular}) {
    const auto f = VelocityField::make(k, 2, 1.3, 1.0);
    for (int i = 0; i < 50; ++i) {
      const Vec2 x{u01(rng), u01(rng)};
      const double t = 0.49 * u01(rng);
      CHECK(std::abs(f.divergence(t, x)) < 1e-12);
      const Mat2 J = f.jacobian(t, x);
      const double h = 1e-6;
      for (int j = 0; j < 2; ++j) {
        Vec2 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        for (int c = 0; c < 2; ++c) {
          const double fd = (f.velocity(t, xp)[c] - f.velocity(t, xm)[c]) / (2 * h);
          CHECK(J[c][j] == Approx(fd).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("sup norms and sampled estimate") {
  for (FlowKind k : {FlowKind::steady_shear, FlowKind::alternating_shear, FlowKind::cellular}) {
    const auto f = VelocityField::make(k, 2, 1.0, 1.0);
    CHECK(f.grad_sup_norm() == Approx(kTwoPi));
    CHECK(f.speed_sup() == 1.0);
    const double sampled = sampled_grad_sup(f, 64, 4);
    CHECK(sampled <= f.grad_sup_norm() * (1 + 1e-12));
    CHECK(sampled == Approx(f.grad_sup_norm()).epsilon(1e-9));
  }
  CHECK(VelocityField::translation(2, 1.0).grad_sup_norm() == 0.0);
}

TEST_CASE("switching times and kind names") {
  const auto alt = VelocityField::alternating_shear(1.0, 1.0);
  const auto b = alt.breakpoints(0.2, 2.1);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 0.5);
  CHECK(b[3] == 2.0);
  CHECK(alt.breakpoints(0.5, 1.0).empty());
  CHECK(VelocityField::cellular(1.0).breakpoints(0, 5).empty());
  for (FlowKind k : {FlowKind::zero, FlowKind::translation, FlowKind::steady_shear, FlowKind::alternating_shear,
                     FlowKind::cellular}) {
    CHECK(flow_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(flow_kind_from_string("vortex"), DomainError);
  CHECK_THROWS_AS(VelocityField::make(FlowKind::cellular, 1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(VelocityField::alternating_shear(1.0, 0.0), DomainError);
  CHECK(alt.axis_shear(0.1)->axis == 0);
  CHECK(alt.axis_shear(0.6)->axis == 1);
  CHECK_FALSE(VelocityField::cellular(1.0).axis_shear(0.0).has_value());
}

TEST_CASE("alternating shear flow map matches the closed-form composition") {
  const auto alt = VelocityField::alternating_shear(1.0, 1.0);
  FlowMap map(alt, 1.0 / 16);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x{u01(rng), u01(rng)};
    const double s = 2.0 * u01(rng);
    const double t = s + 3.0 * u01(rng);
    const Vec2 got = map.trace(s, t, x);
    const auto ref = oracle::alternating_shear_foot(1.0, 1.0, s, t, x);
    CHECK(torus_distance(got, {ref[0], ref[1]}) < 1e-12);
  }
  CHECK_THROWS_AS(FlowMap(alt, 0.2), DomainError);
  CHECK_THROWS_AS(map.trace(1.0, 0.5, {0.1, 0.1}), DomainError);
}

TEST_CASE("cellular flow map converges under step refinement and is invertible") {
  const auto cell = VelocityField::cellular(1.0);
  const Vec2 x{0.13, 0.71};
  const Vec2 coarse = FlowMap(cell, 1.0 / 32).trace(0.0, 1.0, x);
  const Vec2 fine = FlowMap(cell, 1.0 / 64).trace(0.0, 1.0, x);
  const Vec2 finest = FlowMap(cell, 1.0 / 512).trace(0.0, 1.0, x);
  const double e1 = torus_distance(coarse, finest), e2 = torus_distance(fine, finest);
  CHECK(e2 < e1 / 10.0);  // fourth order: ratio near 16
  // Backward trace of the time-reversed steady field undoes the forward trace.
  const auto reversed = VelocityField::cellular(-1.0);
  const Vec2 back = FlowMap(reversed, 1.0 / 512).trace(0.0, 1.0, finest);
  CHECK(torus_distance(back, x) < 1e-10);
}

TEST_CASE("flow map composition over an intermediate time") {
  const auto alt = VelocityField::alternating_shear(1.0, 1.0);
  FlowMap map(alt, 1.0 / 16);
  const Vec2 x{0.37, 0.52};
  const Vec2 direct = map.trace(0.1, 1.9, x);
  const Vec2 split = map.trace(0.1, 0.8, map.trace(0.8, 1.9, x));
  CHECK(torus_distance(direct, split) < 1e-12);
}

}  // TEST_SUITE
