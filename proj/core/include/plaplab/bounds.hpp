#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plaplab/rate_function.hpp"

namespace plaplab {

enum class MixingCase { strong, weak };
std::string to_string(MixingCase c);
MixingCase mixing_case_from_string(const std::string& name);

/// 48^{p-1} p^p 2^{p(p-1)}.
double d_p_constant(double p);

/// norm0 / ((p - 2) norm0^{p-2} + 1)^{1/(p-2)}.
double decay_threshold(double norm0, double p);

/// norm0 / (nu lambda1^{p/2} (p - 2) dt norm0^{p-2} + 1)^{1/(p-2)}.
double gronwall_decay(double nu, double p, double lambda1, double norm0, double dt);

/// 1 / (nu lambda1^{p/2}).
double trivial_kappa_bound(double nu, double p, double lambda1);

/// h^{-1}(y); DomainError outside the range of h.
double rate_inverse(const RateFunction& h, double y);

struct BoundInputs {
  double p = 3.0;
  double nu = 1e-3;
  double alpha = 1.0;
  double beta = 1.0;
  int d = 2;
  double grad_u_sup = 0.0;
  double theta0_l2 = 1.0;
  RateFunction h = RateFunction::exponential(1.0, 1.0);
  double lambda1 = 0.0;  // 0 selects 4 pi^2
  double weyl_c = 0.0;   // 0 selects weyl_constant(d, 1, 0.01)

  double principal() const;
  double weyl() const;
  void validate() const;
};

/// Diagnostics of the sup defining H1 / H2.
struct SupSearch {
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  /// Relative width of the final bracket in lambda.
  double residual = 0.0;
  /// Where the condition function attains its minimum.
  double argmin = 0.0;
  bool fallback_scan = false;
  std::vector<std::string> warnings;
};

/// log of the left side of the condition defining H at lambda, minus the log
/// of the right side |grad u|^2 / (4 nu). Feasible where <= 0.
double sup_condition(const BoundInputs& in, MixingCase c, double lambda);

/// Largest lambda with sup_condition <= 0. NumericalError when the condition
/// holds nowhere ("nu too large for enhancement regime").
SupSearch H1(const BoundInputs& in);
SupSearch H2(const BoundInputs& in);
SupSearch sup_threshold(const BoundInputs& in, MixingCase c);

/// min{1, 2^{-p-1} h^{-1}(H^{-(a+b)/2} / 2^{1-(a+b)/2})^{(p-2)/2}}, with h^{-1} = 0
/// above the range of h.
double script_H1(const BoundInputs& in, double h1);
/// Same with the exponent (d + 2a + 2b)/4.
double script_H2(const BoundInputs& in, double h2);

struct BoundReport {
  MixingCase mixing_case = MixingCase::strong;
  double d_p = 0.0;
  double trivial = 0.0;
  double threshold_h = 0.0;
  double script_h = 0.0;
  /// min{trivial, 1 / (nu H^{p/2} script_H)}; the bound up to an unspecified constant.
  double rate_factor = 0.0;
  /// Largest eigenvalue not above H (0 when H < lambda1).
  double lambda_n = 0.0;
  bool enhancement_active = false;
  std::optional<double> delta;
  SupSearch search;
};

BoundReport enhanced_rate_factor(const BoundInputs& in, MixingCase c);

struct CorollaryParams {
  double p = 3.0;
  double alpha = 1.0;
  double beta = 1.0;
  int d = 2;
  double q = 1.0;   // power law exponent
  double c2 = 1.0;  // exponential rate
  double grad_u_sup = 0.0;
};

/// Exponent delta with kappa_d <~ nu^{-delta} (exponential law) or |ln nu|^{-delta}/nu (power law).
double corollary_delta(MixingCase c, RateFunction::Law law, const CorollaryParams& params);

/// (d^{(p-2)/2} D_p nu / |grad u|) e^{2 |grad u| dt} |grad theta0|_p^p. `d_p` overrides D_p when positive.
double transport_distance_bound(const BoundInputs& in, double grad_theta0_p, double dt,
                                double d_p = 0.0);

/// d^{(p-2)/2} e^{2 |grad u| dt} |grad theta0|_p^p.
double gradient_growth_bound(int d, double p, double grad_u_sup, double grad_theta0_p, double dt);

/// strong: s + 2 h^{-1}(lambda_N^{-(a+b)/2} / 2)
/// weak:   s + 2 h^{-1}(lambda_N^{-(d+2a+2b)/4} / (2 sqrt(c)))
double lemma42_t0(double s, double lambda_n, const RateFunction& h, double alpha, double beta,
                  MixingCase c, int d = 2, double weyl_c = 0.0);

/// x / (a x^{p-2} + 1)^{1/(p-2)}.
double F_apply(double a, double p, double x);
/// F_{min(b,c)(t2-t0)}(x0).
double F_compose_min(double b, double c, double t0, double t1, double t2, double p, double x0);

struct FIterationReport {
  std::size_t tuples = 0;
  std::size_t monotonicity_checks = 0;
  std::size_t monotonicity_failures = 0;
  /// Relative gap between composing two steps and the closed-form single step.
  double max_composition_error = 0.0;
  /// Largest relative amount by which the composition exceeds F_compose_min (0 if never).
  double max_domination_excess = 0.0;
  bool passed = false;
};

/// Random tuples p in (2, 6], b, c, x0, t_i in (0, 10]: composition law and
/// min{b, c} domination to 1e-12, plus strict monotonicity of F_a on dense x grids.
FIterationReport verify_f_iteration(std::size_t tuples = 10000, std::uint64_t seed = 1);

}  // namespace plaplab
