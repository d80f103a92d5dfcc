#pragma once

#include <optional>
#include <vector>

#include "plaplab/diffusion.hpp"
#include "plaplab/run_record.hpp"
#include "plaplab/scalar_field.hpp"
#include "plaplab/transport.hpp"
#include "plaplab/velocity_field.hpp"

namespace plaplab {

enum class DtPolicy { fixed, adaptive };

struct SolverConfig {
  Grid grid{1, 256};
  VelocityField flow = VelocityField::zero(1);
  /// Diffusion strength; 0 skips the diffusion substep entirely.
  double nu = 1e-2;
  double p = 3.0;
  DtPolicy dt_policy = DtPolicy::adaptive;
  /// Step for the fixed policy.
  double dt = 1e-4;
  /// CFL safety factor in (0, 1] for the adaptive policy.
  double sigma = 0.5;
  /// Cap on the adaptive step (the diffusion limit is infinite at zero gradient).
  double dt_max = 1e-2;
  double eps_g = 0.0;
  TransportOptions transport;

  void validate() const;
};

struct SolverState {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;
  /// Integral of nu * dissipation accumulated by the step quadrature.
  double dissipated = 0.0;

  static SolverState from_field(const ScalarField& field, double time);
  ScalarField field() const;
  double l2_norm() const;
};

struct StepReport {
  double dt = 0.0;
  /// 1/2|f_after|^2 - 1/2|f_before|^2 + dt nu D(midpoint) for the diffusion substep.
  double energy_residual = 0.0;
  /// Face-mobility maximum of the state the diffusion substep acted on.
  double max_mobility = 0.0;
};

struct RecorderOptions {
  /// Spacing of recorded samples (the step is clamped onto sample times).
  double cadence = 1e-2;
  /// Order of the negative Sobolev norm recorded as the mixing norm.
  double beta = 1.0;
  /// Stop once a recorded L2 norm is at or below this value.
  std::optional<double> stop_below;
};

/// Explicit Strang-split integrator for
///   d_t f + u.grad f = nu div(|grad f|^{p-2} grad f).
class Solver {
 public:
  explicit Solver(SolverConfig config);

  const SolverConfig& config() const { return config_; }

  /// Adaptive step: min of the diffusion limit, the advection limit
  /// sigma h / sup|u| and dt_max.
  double cfl_dt(const SolverState& state) const;
  double cfl_dt_from_mobility(double max_mobility) const;
  /// Stability limit of the diffusion substep (sigma = 1).
  double stability_limit(double max_mobility) const;

  /// One explicit diffusion step. Throws NumericalError above the stability limit.
  StepReport p_laplacian_step(SolverState& state, double dt);
  /// Half transport, full diffusion, half transport.
  StepReport step(SolverState& state, double dt);
  /// Steps without recording until state.time == t.
  void advance_to(SolverState& state, double t);

  /// Runs from theta0 at time s to t_end (or the stop threshold), sampling at
  /// the recorder cadence. Consecutive half transports are fused between samples.
  RunRecord simulate(const ScalarField& theta0, double s, double t_end,
                     const RecorderOptions& recorder);

 private:
  double diffusion_substep(SolverState& state, double dt, StepReport& report);
  double next_dt(double max_mobility, double remaining) const;

  SolverConfig config_;
  Transporter transporter_;
  PLaplacian laplacian_;
  std::vector<double> scratch_;
};

}  // namespace plaplab
