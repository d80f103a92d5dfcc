#include "plaplab/bounds.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "plaplab/eigen_table.hpp"
#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

void require_p(double p, const char* what) {
  if (!(p > 2.0) || !std::isfinite(p)) throw DomainError(std::string(what) + ": p must exceed 2");
}

// Largest m <= bound that is a sum of d integer squares.
std::int64_t largest_lattice_norm(int d, std::int64_t bound) {
  auto isqrt = [](std::int64_t m) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
    while (r * r > m) --r;
    while ((r + 1) * (r + 1) <= m) ++r;
    return r;
  };
  if (d == 1) {
    const std::int64_t r = isqrt(bound);
    return r * r;
  }
  for (std::int64_t m = bound; m > 0; --m) {
    for (std::int64_t a = 0; 2 * a * a <= m; ++a) {
      const std::int64_t rest = m - a * a;
      const std::int64_t b = isqrt(rest);
      if (b * b == rest) return m;
    }
  }
  return 0;
}

// x^e with the base clamped at zero.
double clamped_pow(double x, double e) { return std::pow(std::max(x, 0.0), e); }

}  // namespace

std::string to_string(MixingCase c) { return c == MixingCase::strong ? "strong" : "weak"; }

MixingCase mixing_case_from_string(const std::string& name) {
  if (name == "strong") return MixingCase::strong;
  if (name == "weak") return MixingCase::weak;
  throw DomainError("unknown mixing case '" + name + "'");
}

double d_p_constant(double p) {
  require_p(p, "d_p_constant");
  return std::pow(48.0, p - 1.0) * std::pow(p, p) * std::pow(2.0, p * (p - 1.0));
}

double decay_threshold(double norm0, double p) {
  require_p(p, "decay_threshold");
  if (!(norm0 > 0.0)) throw DomainError("decay_threshold: norm0 must be positive");
  return norm0 / std::pow((p - 2.0) * std::pow(norm0, p - 2.0) + 1.0, 1.0 / (p - 2.0));
}

double gronwall_decay(double nu, double p, double lambda1, double norm0, double dt) {
  require_p(p, "gronwall_decay");
  if (!(dt >= 0.0)) throw DomainError("gronwall_decay: dt must be nonnegative");
  if (!(nu >= 0.0) || !(lambda1 > 0.0) || !(norm0 >= 0.0)) {
    throw DomainError("gronwall_decay: nu, lambda1, norm0 out of range");
  }
  const double a = nu * std::pow(lambda1, 0.5 * p) * (p - 2.0) * dt;
  return norm0 / std::pow(a * std::pow(norm0, p - 2.0) + 1.0, 1.0 / (p - 2.0));
}

double trivial_kappa_bound(double nu, double p, double lambda1) {
  require_p(p, "trivial_kappa_bound");
  if (!(nu > 0.0) || !(lambda1 > 0.0)) throw DomainError("trivial_kappa_bound: nu and lambda1 must be positive");
  return 1.0 / (nu * std::pow(lambda1, 0.5 * p));
}

double rate_inverse(const RateFunction& h, double y) { return h.inverse(y); }

double BoundInputs::principal() const {
  return lambda1 > 0.0 ? lambda1 : 4.0 * std::numbers::pi * std::numbers::pi;
}

double BoundInputs::weyl() const { return weyl_c > 0.0 ? weyl_c : weyl_constant(d, 1.0, 0.01); }

void BoundInputs::validate() const {
  require_p(p, "bounds");
  if (!(nu > 0.0)) throw DomainError("bounds: nu must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("bounds: alpha must lie in (0, 1]");
  if (!(beta > 0.0)) throw DomainError("bounds: beta must be positive");
  if (d != 1 && d != 2) throw DomainError("bounds: d must be 1 or 2");
  if (!(grad_u_sup > 0.0)) {
    throw DomainError("bounds: |grad u|_inf must be positive (zero flow has no enhancement bound)");
  }
  if (!(theta0_l2 > 0.0)) throw DomainError("bounds: |theta0|_2 must be positive");
}

double script_H1(const BoundInputs& in, double h1) {
  require_p(in.p, "script_H1");
  if (!(h1 > 0.0)) throw DomainError("script_H1: H1 must be positive");
  const double e = 0.5 * (in.alpha + in.beta);
  const double arg = std::pow(h1, -e) / std::pow(2.0, 1.0 - e);
  // Above the range of h the inverse is taken as 0.
  if (!in.h.in_range(arg)) return 0.0;
  const double tau = in.h.inverse(arg);
  return std::min(1.0, std::pow(2.0, -in.p - 1.0) * clamped_pow(tau, 0.5 * (in.p - 2.0)));
}

double script_H2(const BoundInputs& in, double h2) {
  require_p(in.p, "script_H2");
  if (!(h2 > 0.0)) throw DomainError("script_H2: H2 must be positive");
  const double e = 0.25 * (in.d + 2.0 * in.alpha + 2.0 * in.beta);
  const double arg = std::pow(h2, -e) / std::pow(2.0, 1.0 - e);
  if (!in.h.in_range(arg)) return 0.0;
  const double tau = in.h.inverse(arg);
  return std::min(1.0, std::pow(2.0, -in.p - 1.0) * clamped_pow(tau, 0.5 * (in.p - 2.0)));
}

BoundReport enhanced_rate_factor(const BoundInputs& in, MixingCase c) {
  in.validate();
  BoundReport r;
  r.mixing_case = c;
  r.d_p = d_p_constant(in.p);
  r.trivial = trivial_kappa_bound(in.nu, in.p, in.principal());
  r.search = sup_threshold(in, c);
  r.threshold_h = r.search.value;
  r.script_h = c == MixingCase::strong ? script_H1(in, r.threshold_h) : script_H2(in, r.threshold_h);
  // Below lambda1 the enhanced form cannot beat the trivial bound.
  r.rate_factor = r.script_h > 0.0
                      ? std::min(r.trivial, 1.0 / (in.nu * std::pow(r.threshold_h, 0.5 * in.p) * r.script_h))
                      : r.trivial;
  r.enhancement_active = r.threshold_h >= in.principal();
  if (r.enhancement_active) {
    const double k2_bound = r.threshold_h / (4.0 * std::numbers::pi * std::numbers::pi);
    if (k2_bound <= 1e12) {
      r.lambda_n = 4.0 * std::numbers::pi * std::numbers::pi *
                   static_cast<double>(largest_lattice_norm(in.d, static_cast<std::int64_t>(k2_bound)));
    } else {
      r.lambda_n = r.threshold_h;
      r.search.warnings.push_back("lambda_N approximated by H: lattice search range exceeded");
    }
  }
  if (in.h.law() != RateFunction::Law::tabulated) {
    CorollaryParams cp{in.p, in.alpha, in.beta, in.d, in.h.second(), in.h.second(), in.grad_u_sup};
    r.delta = corollary_delta(c, in.h.law(), cp);
  }
  return r;
}

double corollary_delta(MixingCase c, RateFunction::Law law, const CorollaryParams& k) {
  require_p(k.p, "corollary_delta");
  if (!(k.alpha > 0.0) || !(k.beta > 0.0)) throw DomainError("corollary_delta: alpha, beta must be positive");
  if (law == RateFunction::Law::tabulated) throw DomainError("corollary_delta: needs a power or exponential law");
  const double ab = k.alpha + k.beta;
  if (law == RateFunction::Law::power) {
    if (!(k.q > 0.0)) throw DomainError("corollary_delta: q must be positive");
    return c == MixingCase::strong ? k.p * k.q / ab : 2.0 * k.p * k.q / (2.0 * ab + k.d);
  }
  if (!(k.c2 > 0.0) || !(k.grad_u_sup > 0.0)) {
    throw DomainError("corollary_delta: c2 and |grad u|_inf must be positive");
  }
  if (c == MixingCase::strong) {
    const double num = 4.0 * k.grad_u_sup * ab;
    return num / (k.p * k.c2 + num);
  }
  const double num = 2.0 * k.grad_u_sup * (k.d + 2.0 * ab);
  return num / (k.p * k.c2 + num);
}

double transport_distance_bound(const BoundInputs& in, double grad_theta0_p, double dt, double d_p) {
  require_p(in.p, "transport_distance_bound");
  if (!(in.grad_u_sup > 0.0)) throw DomainError("transport_distance_bound: |grad u|_inf must be positive");
  if (!(dt >= 0.0) || !(grad_theta0_p >= 0.0)) throw DomainError("transport_distance_bound: negative input");
  const double dp = d_p > 0.0 ? d_p : d_p_constant(in.p);
  return std::pow(static_cast<double>(in.d), 0.5 * (in.p - 2.0)) * dp * in.nu / in.grad_u_sup *
         std::exp(2.0 * in.grad_u_sup * dt) * std::pow(grad_theta0_p, in.p);
}

double gradient_growth_bound(int d, double p, double grad_u_sup, double grad_theta0_p, double dt) {
  require_p(p, "gradient_growth_bound");
  if (!(dt >= 0.0) || !(grad_theta0_p >= 0.0) || !(grad_u_sup >= 0.0)) {
    throw DomainError("gradient_growth_bound: negative input");
  }
  return std::pow(static_cast<double>(d), 0.5 * (p - 2.0)) * std::exp(2.0 * grad_u_sup * dt) *
         std::pow(grad_theta0_p, p);
}

double lemma42_t0(double s, double lambda_n, const RateFunction& h, double alpha, double beta,
                  MixingCase c, int d, double weyl_c) {
  if (!(lambda_n > 0.0)) throw DomainError("lemma42_t0: lambda_N must be positive");
  double arg = 0.0;
  if (c == MixingCase::strong) {
    arg = 0.5 * std::pow(lambda_n, -0.5 * (alpha + beta));
  } else {
    const double cw = weyl_c > 0.0 ? weyl_c : weyl_constant(d, 1.0, 0.01);
    arg = std::pow(lambda_n, -0.25 * (d + 2.0 * alpha + 2.0 * beta)) / (2.0 * std::sqrt(cw));
  }
  return s + 2.0 * h.inverse(arg);
}

double F_apply(double a, double p, double x) {
  require_p(p, "F_apply");
  if (!(a >= 0.0) || !(x >= 0.0)) throw DomainError("F_apply: a and x must be nonnegative");
  if (x == 0.0) return 0.0;
  return x * std::exp(-std::log1p(a * std::pow(x, p - 2.0)) / (p - 2.0));
}

double F_compose_min(double b, double c, double t0, double t1, double t2, double p, double x0) {
  if (!(b >= 0.0) || !(c >= 0.0)) throw DomainError("F_compose_min: b and c must be nonnegative");
  if (!(t0 < t1 && t1 < t2)) throw DomainError("F_compose_min: needs t0 < t1 < t2");
  return F_apply(std::min(b, c) * (t2 - t0), p, x0);
}

FIterationReport verify_f_iteration(std::size_t tuples, std::uint64_t seed) {
  FIterationReport r;
  r.tuples = tuples;
  std::mt19937_64 rng(seed);
  // Open-closed draws: (lo, hi].
  auto draw = [&rng](double lo, double hi) {
    return hi - (hi - lo) * std::generate_canonical<double, 53>(rng);
  };
  auto relative = [](double u, double v) {
    const double scale = std::max(std::abs(u), std::abs(v));
    return scale < 1e-300 ? 0.0 : std::abs(u - v) / scale;
  };
  for (std::size_t i = 0; i < tuples; ++i) {
    const double p = draw(2.0, 6.0);
    const double b = draw(0.0, 10.0);
    const double c = draw(0.0, 10.0);
    const double x0 = draw(0.0, 10.0);
    double t0 = draw(0.0, 10.0), t1 = draw(0.0, 10.0), t2 = draw(0.0, 10.0);
    if (t0 > t1) std::swap(t0, t1);
    if (t1 > t2) std::swap(t1, t2);
    if (t0 > t1) std::swap(t0, t1);
    if (!(t0 < t1 && t1 < t2)) continue;
    const double composed = F_apply(c * (t2 - t1), p, F_apply(b * (t1 - t0), p, x0));
    const double closed =
        x0 * std::exp(-std::log1p((c * (t2 - t1) + b * (t1 - t0)) * std::pow(x0, p - 2.0)) / (p - 2.0));
    r.max_composition_error = std::max(r.max_composition_error, relative(composed, closed));
    const double bound = F_compose_min(b, c, t0, t1, t2, p, x0);
    if (composed > bound) {
      r.max_domination_excess = std::max(r.max_domination_excess, relative(composed, bound));
    }
  }
  // Monotonicity in x on a dense grid for a spread of (a, p).
  constexpr int kGrid = 2001;
  for (std::size_t j = 0; j < 200; ++j) {
    const double p = draw(2.0, 6.0);
    const double a = draw(0.0, 10.0);
    double prev = F_apply(a, p, 0.0);
    for (int k = 1; k < kGrid; ++k) {
      const double x = 10.0 * k / (kGrid - 1);
      const double v = F_apply(a, p, x);
      ++r.monotonicity_checks;
      if (!(v > prev)) ++r.monotonicity_failures;
      prev = v;
    }
  }
  r.passed = r.monotonicity_failures == 0 && r.max_composition_error <= 1e-12 &&
             r.max_domination_excess <= 1e-12;
  return r;
}

}  // namespace plaplab
