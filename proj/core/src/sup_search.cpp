#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plaplab/bounds.hpp"
#include "plaplab/errors.hpp"

namespace plaplab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_d_p(double p) {
  return (p - 1.0) * std::log(48.0) + p * std::log(p) + p * (p - 1.0) * std::numbers::ln2;
}

// arg(lambda) = scale * lambda^{-exponent}
struct Argument {
  double scale;
  double exponent;
};

Argument argument_of(const BoundInputs& in, MixingCase c) {
  if (c == MixingCase::strong) return {0.5, 0.5 * (in.alpha + in.beta)};
  return {1.0 / (2.0 * std::sqrt(in.weyl())), 0.25 * (in.d + 2.0 * in.alpha + 2.0 * in.beta)};
}

}  // namespace

double sup_condition(const BoundInputs& in, MixingCase c, double lambda) {
  if (!(lambda > 0.0)) return kInf;
  const Argument a = argument_of(in, c);
  const double arg = a.scale * std::pow(lambda, -a.exponent);
  if (!in.h.in_range(arg)) return kInf;
  const double tau = in.h.inverse(arg);
  if (!(tau > 0.0)) return kInf;
  const double p = in.p;
  const double lhs = 0.5 * p * std::log(lambda) + 0.5 * (p - 2.0) * std::log(static_cast<double>(in.d)) +
                     log_d_p(p) + (p - 2.0) * std::log(in.theta0_l2) + 4.0 * in.grad_u_sup * tau -
                     std::log(tau);
  const double rhs = std::log(in.grad_u_sup * in.grad_u_sup / (4.0 * in.nu));
  return lhs - rhs;
}

SupSearch sup_threshold(const BoundInputs& in, MixingCase c) {
  in.validate();
  auto f = [&](double u) { return sup_condition(in, c, std::exp(u)); };
  SupSearch out;

  // Left edge of the domain: arg(lambda) must stay inside the range of h.
  const Argument a = argument_of(in, c);
  const double sup_h = in.h.sup_value();
  double u_start = -200.0;
  if (std::isfinite(sup_h)) {
    u_start = std::max(u_start, std::log(a.scale / sup_h) / a.exponent);
  }
  u_start += 1e-9;

  // Coarse scan for the minimum of the condition function.
  const double du = std::log(10.0) / 32.0;
  double best_u = u_start, best_f = f(u_start);
  double prev = best_f;
  int rising = 0;
  for (double u = u_start + du; u < 700.0; u += du) {
    const double v = f(u);
    if (!std::isfinite(v)) break;
    if (v < best_f) {
      best_f = v;
      best_u = u;
    }
    rising = v > prev ? rising + 1 : 0;
    prev = v;
    if (rising >= 4 && v > 0.0 && best_f <= 0.0) break;
    if (rising >= 64 && v > 0.0) break;
  }
  if (best_f > 0.0) {
    // Golden-section refinement around the grid minimum.
    double lo = best_u - du, hi = best_u + du;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 100; ++i) {
      const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      if (f(x1) < f(x2)) hi = x2;
      else lo = x1;
    }
    const double um = 0.5 * (lo + hi);
    if (f(um) < best_f) {
      best_f = f(um);
      best_u = um;
    }
  }
  out.argmin = std::exp(best_u);
  if (!(best_f <= 0.0)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "nu too large for enhancement regime: the " << to_string(c)
        << " threshold condition fails for every lambda (smallest log-margin " << best_f
        << " at lambda=" << std::exp(best_u) << ", nu=" << in.nu << ")";
    throw NumericalError(msg.str());
  }

  // Geometric bracket expansion to the right of the feasible minimum.
  double lo = best_u, width = du, hi = lo + width;
  while (f(hi) <= 0.0) {
    lo = hi;
    width *= 2.0;
    hi = lo + width;
    if (hi > 700.0) throw NumericalError("threshold condition holds for unbounded lambda");
  }
  out.bracket_lo = std::exp(lo);
  out.bracket_hi = std::exp(hi);

  // Monotonicity check on the bracket; fall back to a dense log-grid scan.
  const int checks = 64;
  bool monotone = true;
  double last = f(lo);
  for (int i = 1; i <= checks; ++i) {
    const double v = f(lo + (hi - lo) * i / checks);
    if (v < last - 1e-12 * std::max(1.0, std::abs(last))) monotone = false;
    last = v;
  }
  if (!monotone) {
    out.fallback_scan = true;
    out.warnings.push_back("condition not monotone on the bracket; using a 1024-per-decade grid scan");
    const double step = std::log(10.0) / 1024.0;
    double a_lo = lo;
    for (double u = lo; u + step <= hi + step; u += step) {
      if (f(u) <= 0.0 && f(u + step) > 0.0) a_lo = u;
    }
    lo = a_lo;
    hi = a_lo + step;
  }

  int iterations = 0;
  while (hi - lo > 1e-13 && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0) lo = mid;
    else hi = mid;
    ++iterations;
  }
  out.iterations = iterations;
  out.value = std::exp(lo);
  out.residual = std::expm1(hi - lo);
  return out;
}

SupSearch H1(const BoundInputs& in) { return sup_threshold(in, MixingCase::strong); }
SupSearch H2(const BoundInputs& in) { return sup_threshold(in, MixingCase::weak); }

}  // namespace plaplab
