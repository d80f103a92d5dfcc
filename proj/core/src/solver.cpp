#include "plaplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plaplab/errors.hpp"
#include "plaplab/spectral.hpp"

namespace plaplab {
namespace {

double half_energy(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return 0.5 * sum / static_cast<double>(v.size());
}

constexpr double kBlowUpTolerance = 1e-3;

struct IntegrateStats {
  std::int64_t steps = 0;
  double residual = 0.0;
  double residual_abs = 0.0;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("solver: nu must be a finite nonnegative number");
  if (!(p > 2.0) || !std::isfinite(p)) throw ConfigError("solver: p must exceed 2");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw ConfigError("solver: sigma must lie in (0, 1]");
  if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
  if (!(dt_max > 0.0)) throw ConfigError("solver: dt_max must be positive");
  if (!(eps_g >= 0.0)) throw ConfigError("solver: eps_g must be nonnegative");
  if (!flow.is_zero() && flow.dim() != grid.dim()) {
    throw ConfigError("solver: flow dimension does not match the grid");
  }
}

SolverState SolverState::from_field(const ScalarField& field, double time) {
  return SolverState{field.grid(), std::vector<double>(field.values().begin(), field.values().end()),
                     time, 0.0};
}

ScalarField SolverState::field() const { return ScalarField::centered(grid, values); }

double SolverState::l2_norm() const { return std::sqrt(2.0 * half_energy(values)); }

Solver::Solver(SolverConfig config)
    : config_((config.validate(), config)),
      transporter_(config.grid, config.flow, config.transport),
      laplacian_(config.grid, config.p, config.eps_g),
      scratch_(config.grid.size()) {}

double Solver::cfl_dt_from_mobility(double max_mobility) const {
  const Grid& g = config_.grid;
  double dt = config_.dt_max;
  if (config_.nu > 0.0) {
    dt = std::min(dt, diffusion_dt_limit(g.spacing(), g.dim(), config_.nu, config_.p, max_mobility,
                                         config_.sigma));
  }
  const double speed = config_.flow.is_zero() ? 0.0 : config_.flow.speed_sup();
  if (speed > 0.0) dt = std::min(dt, config_.sigma * g.spacing() / speed);
  return dt;
}

double Solver::cfl_dt(const SolverState& state) const {
  return cfl_dt_from_mobility(config_.nu > 0.0 ? laplacian_.max_mobility(state.values) : 0.0);
}

double Solver::stability_limit(double max_mobility) const {
  const Grid& g = config_.grid;
  return diffusion_dt_limit(g.spacing(), g.dim(), config_.nu, config_.p, max_mobility, 1.0);
}

double Solver::diffusion_substep(SolverState& state, double dt, StepReport& report) {
  const auto ev = laplacian_.evaluate(state.values);
  report.max_mobility = ev.max_mobility;
  const double limit = stability_limit(ev.max_mobility);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "diffusion step dt=" << dt << " exceeds the stability limit " << limit;
    throw NumericalError(msg.str());
  }
  std::copy(state.values.begin(), state.values.end(), scratch_.begin());
  const double e0 = half_energy(state.values);
  laplacian_.apply(state.values, config_.nu * dt);
  const double e1 = half_energy(state.values);
  if (std::sqrt(e1) > std::sqrt(e0) * (1.0 + kBlowUpTolerance)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "blow-up guard: L2 norm grew from " << std::sqrt(2.0 * e0) << " to "
        << std::sqrt(2.0 * e1) << " at t=" << state.time;
    throw NumericalError(msg.str());
  }
  for (std::size_t i = 0; i < scratch_.size(); ++i) {
    scratch_[i] = 0.5 * (scratch_[i] + state.values[i]);
  }
  const double quad = dt * config_.nu * laplacian_.dissipation(scratch_);
  state.dissipated += quad;
  report.energy_residual = e1 - e0 + quad;
  return report.energy_residual;
}

StepReport Solver::p_laplacian_step(SolverState& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("p_laplacian_step: dt must be positive");
  StepReport report;
  report.dt = dt;
  if (config_.nu > 0.0) diffusion_substep(state, dt, report);
  state.time += dt;
  return report;
}

StepReport Solver::step(SolverState& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  StepReport report;
  report.dt = dt;
  const double t0 = state.time;
  const double mid = t0 + 0.5 * dt;
  transporter_.advance(state.values, t0, mid);
  if (config_.nu > 0.0) diffusion_substep(state, dt, report);
  transporter_.advance(state.values, mid, t0 + dt);
  state.time = t0 + dt;
  return report;
}

double Solver::next_dt(double max_mobility, double remaining) const {
  if (config_.dt_policy == DtPolicy::fixed) {
    return remaining <= config_.dt * (1.0 + 1e-9) ? remaining : config_.dt;
  }
  const double dt = cfl_dt_from_mobility(max_mobility);
  if (remaining <= dt) return remaining;
  // Avoid a sliver step before the target.
  if (remaining < 2.0 * dt) return 0.5 * remaining;
  return dt;
}

namespace {

// Integrates with fused Strang transports up to `target`; the state is
// synchronized (transport applied through `target`) on return.
template <class Diffuse, class NextDt>
IntegrateStats integrate(SolverState& state, double target, const Transporter& transporter,
                         bool diffuse, double initial_mobility, Diffuse&& diffusion,
                         NextDt&& choose_dt) {
  IntegrateStats stats;
  if (!(target > state.time)) return stats;
  if (!diffuse) {
    transporter.advance(state.values, state.time, target);
    state.time = target;
    stats.steps = 1;
    return stats;
  }
  double transported = state.time;
  double mobility = initial_mobility;
  while (state.time < target) {
    const double remaining = target - state.time;
    const double dt = choose_dt(mobility, remaining);
    const double mid = state.time + 0.5 * dt;
    transporter.advance(state.values, transported, mid);
    transported = mid;
    StepReport report;
    const double r = diffusion(state, dt, report);
    mobility = report.max_mobility;
    stats.residual += r;
    stats.residual_abs += std::abs(r);
    ++stats.steps;
    state.time = dt == remaining ? target : state.time + dt;
  }
  transporter.advance(state.values, transported, target);
  state.time = target;
  return stats;
}

}  // namespace

void Solver::advance_to(SolverState& state, double t) {
  if (t < state.time) throw DomainError("advance_to: target precedes the current time");
  const bool diffuse = config_.nu > 0.0;
  integrate(
      state, t, transporter_, diffuse, diffuse ? laplacian_.max_mobility(state.values) : 0.0,
      [this](SolverState& s, double dt, StepReport& r) { return diffusion_substep(s, dt, r); },
      [this](double m, double rem) { return next_dt(m, rem); });
}

RunRecord Solver::simulate(const ScalarField& theta0, double s, double t_end,
                           const RecorderOptions& recorder) {
  if (!(theta0.grid() == config_.grid)) throw DomainError("simulate: initial data grid mismatch");
  if (!(t_end >= s)) throw DomainError("simulate: t_end precedes s");
  if (!(recorder.cadence > 0.0)) throw DomainError("simulate: recorder cadence must be positive");
  if (!(recorder.beta > 0.0)) throw DomainError("simulate: mixing order beta must be positive");

  RunRecord record;
  record.nu = config_.nu;
  record.p = config_.p;
  record.s = s;
  record.t_max = t_end;
  record.beta = recorder.beta;
  record.norm0 = theta0.l2_norm();
  record.threshold = recorder.stop_below.value_or(0.0);

  SolverState state = SolverState::from_field(theta0, s);
  auto take_sample = [&](double residual) {
    const ScalarField f = state.field();
    Sample sample;
    sample.t = state.time;
    sample.l2 = f.l2_norm();
    sample.grad_p = grad_lp_norm(f, config_.p);
    sample.mixing = sobolev_norm(f, -recorder.beta);
    sample.residual = residual;
    record.samples.push_back(sample);
    return sample.l2;
  };

  double l2 = take_sample(0.0);
  const bool diffuse = config_.nu > 0.0;
  for (std::int64_t k = 1; state.time < t_end; ++k) {
    if (recorder.stop_below && l2 <= *recorder.stop_below) break;
    const double target = std::min(s + static_cast<double>(k) * recorder.cadence, t_end);
    const auto stats = integrate(
        state, target, transporter_, diffuse,
        diffuse ? laplacian_.max_mobility(state.values) : 0.0,
        [this](SolverState& st, double dt, StepReport& r) { return diffusion_substep(st, dt, r); },
        [this](double m, double rem) { return next_dt(m, rem); });
    record.steps += stats.steps;
    record.residual_abs_sum += stats.residual_abs;
    l2 = take_sample(stats.residual);
  }
  record.dissipated = state.dissipated;
  if (record.threshold > 0.0) {
    record.crossing_time = detect_crossing(record.samples, record.threshold);
    if (!record.crossing_time) record.add_flag("not_reached");
  }
  return record;
}

}  // namespace plaplab
