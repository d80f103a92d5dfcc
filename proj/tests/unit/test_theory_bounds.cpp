#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "theory.hpp"
#include "plaplab/bounds.hpp"
#include "plaplab/eigen_table.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/rate_function.hpp"

using namespace plaplab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const double kLambda1 = 4.0 * kPi * kPi;

BoundInputs reference_inputs(double nu) {
  BoundInputs in;
  in.p = 3.0;
  in.nu = nu;
  in.alpha = 1.0;
  in.beta = 1.0;
  in.d = 2;
  in.grad_u_sup = 2.0 * kPi;
  in.theta0_l2 = 1.0;
  in.h = RateFunction::exponential(1.0, 1.0);
  return in;
}

oracle::ConditionInputs oracle_inputs(const BoundInputs& in, MixingCase c) {
  oracle::ConditionInputs o;
  o.p = in.p;
  o.nu = in.nu;
  o.grad_u = in.grad_u_sup;
  o.theta0 = in.theta0_l2;
  o.d = in.d;
  if (c == MixingCase::strong) {
    o.scale = 0.5L;
    o.exponent = 0.5L * (in.alpha + in.beta);
  } else {
    o.scale = 1.0L / (2.0L * std::sqrt(static_cast<long double>(in.weyl())));
    o.exponent = 0.25L * (in.d + 2.0L * in.alpha + 2.0L * in.beta);
  }
  const RateFunction h = in.h;
  o.h_inverse = [h](long double y) -> std::optional<long double> {
    if (h.law() == RateFunction::Law::exponential) {
      if (y >= h.first()) return std::nullopt;
      return std::log(h.first() / y) / h.second();
    }
    return std::pow(h.first() / y, 1.0L / h.second());
  };
  return o;
}
}  // namespace

TEST_SUITE("theory_bounds") {

TEST_CASE("D_p against exact integer products") {
  CHECK(d_p_constant(3.0) == 3981312.0);
  for (int p = 3; p <= 6; ++p) {
    const double exact = static_cast<double>(oracle::d_p_integer(p));
    CHECK(d_p_constant(p) == Approx(exact).epsilon(1e-13));
  }
  CHECK(d_p_constant(2.5) == Approx(static_cast<double>(oracle::d_p_real(2.5L))).epsilon(1e-13));
  CHECK_THROWS_AS(d_p_constant(2.0), DomainError);
}

TEST_CASE("threshold, envelope and trivial bound") {
  CHECK(decay_threshold(1.0, 3.0) == Approx(0.5));
  CHECK(decay_threshold(2.0, 4.0) == Approx(2.0 / std::sqrt(2.0 * 4.0 + 1.0)));
  CHECK(trivial_kappa_bound(1e-2, 3.0, kLambda1) == Approx(1.0 / (1e-2 * std::pow(2.0 * kPi, 3))));
  for (double p : {2.5, 3.0, 4.0}) {
    for (double t : {0.1, 1.0, 7.0}) {
      const double rk = static_cast<double>(oracle::gronwall_rk4(1e-2, p, kLambda1, 1.3, t, 20000));
      CHECK(gronwall_decay(1e-2, p, kLambda1, 1.3, t) == Approx(rk).epsilon(1e-10));
    }
  }
  // The envelope crosses the threshold exactly at the trivial bound.
  const double nu = 3e-3;
  CHECK(gronwall_decay(nu, 3.0, kLambda1, 1.0, trivial_kappa_bound(nu, 3.0, kLambda1)) ==
        Approx(decay_threshold(1.0, 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gronwall_decay(nu, 3.0, kLambda1, 1.0, -1.0), DomainError);
}

TEST_CASE("H1 and H2 agree with a brute-force scan of the threshold condition") {
  for (double nu : {1e-10, 1e-12, 1e-16}) {
    for (MixingCase c : {MixingCase::strong, MixingCase::weak}) {
      for (bool power : {false, true}) {
        BoundInputs in = reference_inputs(nu);
        if (power) in.h = RateFunction::power(1.0, 1.0);
        const auto ref = oracle::brute_sup(oracle_inputs(in, c), std::exp(-200.0L), 1e40L);
        if (!ref) {
          CHECK_THROWS_AS(sup_threshold(in, c), NumericalError);
          continue;
        }
        const SupSearch s = sup_threshold(in, c);
        CHECK(s.value == Approx(static_cast<double>(*ref)).epsilon(1e-9));
        CHECK(sup_condition(in, c, s.value) <= 0.0);
        CHECK(sup_condition(in, c, s.value * (1 + 1e-9)) > 0.0);
      }
    }
  }
}

TEST_CASE("large viscosity has no enhancement regime") {
  BoundInputs in = reference_inputs(1e-3);
  try {
    (void)H1(in);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("nu too large for enhancement regime") != std::string::npos);
  }
  in.grad_u_sup = 0.0;
  CHECK_THROWS_AS(H1(in), DomainError);
}

TEST_CASE("script H at a worked value") {
  // H1 = 1e4, exponential law c1 = c2 = 1, alpha + beta = 2, p = 3:
  // h^{-1}(1e-4) = ln 1e4, script H = 2^{-4} sqrt(ln 1e4).
  const BoundInputs in = reference_inputs(1e-10);
  CHECK(script_H1(in, 1e4) == Approx(0.0625 * std::sqrt(std::log(1e4))).epsilon(1e-14));
  CHECK(script_H1(in, 1e4) == Approx(0.18967).epsilon(1e-4));
  CHECK(script_H1(in, 1e300) == 1.0);
  // Exponent (d + 2a + 2b) / 4 = 3/2 for the weak variant.
  const double h2 = 100.0;
  const double arg = std::pow(h2, -1.5) / std::pow(2.0, -0.5);
  CHECK(script_H2(in, h2) == Approx(0.0625 * std::sqrt(std::log(1.0 / arg))).epsilon(1e-14));
}

TEST_CASE("enhanced rate factor beats the trivial bound at small viscosity") {
  for (MixingCase c : {MixingCase::strong, MixingCase::weak}) {
    BoundInputs in = reference_inputs(1e-16);
    in.h = RateFunction::exponential(1.0, 100.0);
    const BoundReport r = enhanced_rate_factor(in, c);
    CHECK(r.enhancement_active);
    CHECK(r.rate_factor < r.trivial);
    CHECK(r.lambda_n <= r.threshold_h);
    CHECK(r.lambda_n >= kLambda1);
    REQUIRE(r.delta.has_value());
    CHECK(*r.delta > 0.0);
    CHECK(*r.delta < 1.0);
    CHECK(r.d_p == d_p_constant(3.0));
  }
}

TEST_CASE("slow mixing keeps the threshold below the principal eigenvalue") {
  // c2 = 1: the condition grows like lambda^{26.6}, H1 < 1 and script H1 is 0.
  const BoundReport r = enhanced_rate_factor(reference_inputs(1e-12), MixingCase::strong);
  CHECK_FALSE(r.enhancement_active);
  CHECK(r.threshold_h < 1.0);
  CHECK(r.script_h == 0.0);
  CHECK(r.rate_factor == r.trivial);
  CHECK(r.lambda_n == 0.0);
}

TEST_CASE("corollary exponents by hand") {
  CorollaryParams k;
  k.p = 3.0;
  k.q = 2.0;
  k.grad_u_sup = 2.0 * kPi;
  CHECK(corollary_delta(MixingCase::strong, RateFunction::Law::power, k) == Approx(3.0).epsilon(1e-12));
  CHECK(corollary_delta(MixingCase::weak, RateFunction::Law::power, k) == Approx(2.0).epsilon(1e-12));
  CHECK(corollary_delta(MixingCase::strong, RateFunction::Law::exponential, k) ==
        Approx(16.0 * kPi / (3.0 + 16.0 * kPi)).epsilon(1e-12));
  CHECK(corollary_delta(MixingCase::weak, RateFunction::Law::exponential, k) ==
        Approx(24.0 * kPi / (3.0 + 24.0 * kPi)).epsilon(1e-12));
  CHECK_THROWS_AS(corollary_delta(MixingCase::strong, RateFunction::Law::tabulated, k), DomainError);
}

TEST_CASE("transport distance and gradient growth bounds") {
  BoundInputs in = reference_inputs(1e-3);
  const double g = 7.5, t = 0.8;
  const double expected = std::sqrt(2.0) * 3981312.0 * 1e-3 / (2.0 * kPi) * std::exp(4.0 * kPi * t) * g * g * g;
  CHECK(transport_distance_bound(in, g, t) == Approx(expected).epsilon(1e-13));
  CHECK(transport_distance_bound(in, g, t, 1.0) == Approx(expected / 3981312.0).epsilon(1e-13));
  CHECK(gradient_growth_bound(2, 3.0, 2.0 * kPi, g, t) ==
        Approx(std::sqrt(2.0) * std::exp(4.0 * kPi * t) * g * g * g).epsilon(1e-13));
}

TEST_CASE("start time of the bootstrap window") {
  const RateFunction h = RateFunction::exponential(1.0, 2.0);
  const double lam = 1000.0;
  CHECK(lemma42_t0(0.5, lam, h, 1.0, 1.0, MixingCase::strong) ==
        Approx(0.5 + 2.0 * std::log(2.0 * lam) / 2.0).epsilon(1e-14));
  const double cw = weyl_constant(2, 1.0, 0.01);
  const double arg = std::pow(lam, -1.5) / (2.0 * std::sqrt(cw));
  CHECK(lemma42_t0(0.0, lam, h, 1.0, 1.0, MixingCase::weak, 2) ==
        Approx(2.0 * std::log(1.0 / arg) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(lemma42_t0(0.0, 0.0, h, 1.0, 1.0, MixingCase::strong), DomainError);
}

TEST_CASE("F_a closed form, composition and domination") {
  CHECK(F_apply(0.0, 3.0, 2.5) == 2.5);
  CHECK(F_apply(1.0, 3.0, 1.0) == Approx(0.5));
  CHECK(F_apply(2.0, 4.0, 3.0) == Approx(3.0 / std::sqrt(19.0)));
  CHECK(F_apply(1.0, 3.0, 0.0) == 0.0);
  CHECK(F_compose_min(2.0, 3.0, 0.0, 1.0, 2.0, 3.0, 1.0) == Approx(F_apply(4.0, 3.0, 1.0)));
  CHECK_THROWS_AS(F_compose_min(1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 1.0), DomainError);
  const FIterationReport r = verify_f_iteration(2000, 5);
  CHECK(r.passed);
  CHECK(r.tuples == 2000);
  CHECK(r.monotonicity_checks == 200 * 2000);
  CHECK(r.max_composition_error <= 1e-12);
  CHECK(r.max_domination_excess <= 1e-12);
}

}  // TEST_SUITE

TEST_SUITE("mixing_analysis") {

TEST_CASE("rate laws and inverses") {
  const RateFunction e = RateFunction::exponential(2.0, 0.5);
  CHECK(e(0.0) == 2.0);
  CHECK(e(4.0) == Approx(2.0 * std::exp(-2.0)));
  CHECK(e.inverse(e(3.3)) == Approx(3.3).epsilon(1e-14));
  CHECK(e.sup_value() == 2.0);
  CHECK_FALSE(e.in_range(2.5));
  CHECK_THROWS_AS(e.inverse(2.5), DomainError);
  const RateFunction pw = RateFunction::power(3.0, 2.0);
  CHECK(pw(2.0) == Approx(0.75));
  CHECK(pw.inverse(0.75) == Approx(2.0));
  CHECK(std::isinf(pw.sup_value()));
  CHECK(pw.scaled(2.0)(2.0) == Approx(1.5));
  CHECK_THROWS_AS(RateFunction::power(1.0, -1.0), DomainError);
  CHECK(rate_law_from_string(to_string(RateFunction::Law::tabulated)) == RateFunction::Law::tabulated);
}

TEST_CASE("tabulated rate interpolates log h and extrapolates") {
  const RateFunction t = RateFunction::tabulated({{0.0, 1.0}, {1.0, std::exp(-1.0)}, {3.0, std::exp(-5.0)}});
  CHECK(t(0.5) == Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(t(2.0) == Approx(std::exp(-3.0)).epsilon(1e-14));
  CHECK(t(4.0) == Approx(std::exp(-7.0)).epsilon(1e-14));
  CHECK(t.inverse(std::exp(-3.0)) == Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(RateFunction::tabulated({{0.0, 1.0}, {1.0, 2.0}}), DomainError);
  CHECK_THROWS_AS(RateFunction::tabulated({{1.0, 1.0}, {0.5, 0.5}}), DomainError);
}

}  // TEST_SUITE
