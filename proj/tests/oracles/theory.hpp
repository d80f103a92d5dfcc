#pragma once

// Independent evaluations of the closed-form constants and envelopes, in
// long double and without the library's log-space shortcuts.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// 48^{p-1} p^p 2^{p(p-1)} for integer p by repeated integer multiplication.
inline long double d_p_integer(int p) {
  unsigned __int128 v = 1;
  for (int i = 0; i < p - 1; ++i) v *= 48;
  for (int i = 0; i < p; ++i) v *= static_cast<unsigned>(p);
  for (int i = 0; i < p * (p - 1); ++i) v *= 2;
  return static_cast<long double>(v);
}

inline long double d_p_real(long double p) {
  return std::pow(48.0L, p - 1) * std::pow(p, p) * std::pow(2.0L, p * (p - 1));
}

/// Solution of y' = -nu lambda1^{p/2} y^{p-1}, y(0) = y0, by RK4 with `steps` steps.
inline long double gronwall_rk4(long double nu, long double p, long double lambda1, long double y0,
                                long double t, int steps) {
  const long double a = nu * std::pow(lambda1, p / 2);
  auto f = [&](long double y) { return -a * std::pow(std::max(y, 0.0L), p - 1); };
  long double y = y0;
  const long double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const long double k1 = f(y), k2 = f(y + 0.5L * h * k1), k3 = f(y + 0.5L * h * k2), k4 = f(y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

/// Left side of the threshold condition, divided by the right side |grad u|^2 / (4 nu).
/// arg = scale * lambda^{-exponent}; h^{-1} supplied by the caller.
struct ConditionInputs {
  long double p, nu, grad_u, theta0, d;
  long double scale, exponent;
  std::function<std::optional<long double>(long double)> h_inverse;
};

inline std::optional<long double> condition_ratio(const ConditionInputs& in, long double lambda) {
  const long double arg = in.scale * std::pow(lambda, -in.exponent);
  const auto tau = in.h_inverse(arg);
  if (!tau || !(*tau > 0)) return std::nullopt;
  const long double lhs = std::pow(lambda, in.p / 2) * std::pow(in.d, (in.p - 2) / 2) * d_p_real(in.p) *
                          std::pow(in.theta0, in.p - 2) / *tau * std::exp(4 * in.grad_u * *tau);
  return lhs / (in.grad_u * in.grad_u / (4 * in.nu));
}

/// Largest lambda with ratio <= 1: dense scan in log lambda (step 1e-3) over
/// [lo, hi], then bisection on the last feasible/infeasible pair.
inline std::optional<long double> brute_sup(const ConditionInputs& in, long double lo, long double hi) {
  auto feasible = [&](long double u) {
    const auto r = condition_ratio(in, std::exp(u));
    return r && *r <= 1;
  };
  const long double u0 = std::log(lo), u1 = std::log(hi);
  const long double step = 1e-3L;
  std::optional<long double> last;
  for (long double u = u0; u <= u1; u += step) {
    if (feasible(u)) last = u;
  }
  if (!last) return std::nullopt;
  long double a = *last, b = *last + step;
  for (int i = 0; i < 200 && b - a > 1e-15L; ++i) {
    const long double m = 0.5L * (a + b);
    (feasible(m) ? a : b) = m;
  }
  return std::exp(a);
}

}  // namespace oracle
