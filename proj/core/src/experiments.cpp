#include "plaplab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "plaplab/errors.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/solver.hpp"
#include "plaplab/spectral.hpp"

namespace plaplab {
namespace {

using nlohmann::json;

constexpr double kLambda1 = 4.0 * std::numbers::pi * std::numbers::pi;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  if (j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

KappaMeasurement measure_kappa_at(const ExperimentConfig& config, double nu) {
  Solver solver(config.solver(nu));
  const Grid grid = config.grid();
  const ScalarField theta0 = make_initial(grid, config.initial_spec());

  KappaMeasurement m;
  m.nu = nu;
  m.trivial_bound = trivial_kappa_bound(nu, config.p, kLambda1);
  const double cadence = config.cadence > 0.0 ? config.cadence : m.trivial_bound / 400.0;
  const double horizon = config.t_max > 0.0 ? config.t_max : 1.5 * m.trivial_bound;
  const std::string snapshot = config.serialize();

  SolverState base = SolverState::from_field(theta0, 0.0);
  bool any_missing = false;
  double best = -1.0;
  for (double s : config.s_list) {
    solver.advance_to(base, s);
    const ScalarField theta_s = base.field();
    const double norm_s = theta_s.l2_norm();
    RecorderOptions rec;
    rec.cadence = cadence;
    rec.beta = config.beta;
    rec.stop_below = norm_s > 0.0 ? decay_threshold(norm_s, config.p) : 0.0;
    RunRecord record = solver.simulate(theta_s, s, s + horizon, rec);
    record.experiment = config.experiment;
    record.config = snapshot;
    record.seed = config.seed;
    if (norm_s == 0.0) {
      record.add_flag("degenerate_input");
      record.add_flag("not_reached");
      record.crossing_time.reset();
    }
    const auto k = record.kappa();
    if (!k) {
      any_missing = true;
      if (horizon > best) {
        best = horizon;
        m.worst_s = s;
      }
    } else if (*k > best) {
      best = *k;
      m.worst_s = s;
    }
    for (const auto& f : record.flags) {
      if (std::find(m.flags.begin(), m.flags.end(), f) == m.flags.end()) m.flags.push_back(f);
    }
    m.runs.push_back(std::move(record));
  }
  m.kappa = std::max(best, 0.0);
  m.reached = !any_missing;
  return m;
}

std::vector<KappaMeasurement> measure_kappa(const ExperimentConfig& config, const LabOptions& options) {
  config.validate();
  std::vector<KappaMeasurement> out(config.nu_list.size());
  std::mutex writer;
  run_jobs(out.size(), options.workers > 0 ? options.workers : config.workers, [&](std::size_t i) {
    out[i] = measure_kappa_at(config, config.nu_list[i]);
    if (options.persist_root) {
      // Single appender: records from concurrent jobs are written one at a time.
      std::lock_guard lock(writer);
      for (const RunRecord& r : out[i].runs) {
        persist(r, record_path(*options.persist_root, config.experiment, r.nu, r.s));
      }
    }
  });
  return out;
}

SweepResult sweep_from_measurements(const ExperimentConfig& config,
                                    std::vector<KappaMeasurement> measurements) {
  SweepResult result;
  const VelocityField flow = config.velocity();
  std::vector<double> x, y;
  for (const KappaMeasurement& m : measurements) {
    SweepRow row;
    row.nu = m.nu;
    row.kappa = m.kappa;
    row.reached = m.reached;
    row.trivial = m.trivial_bound;
    if (!flow.is_zero() && flow.grad_sup_norm() > 0.0 && !m.runs.empty()) {
      const BoundInputs in = config.bound_inputs(m.nu, m.runs.front().norm0);
      for (MixingCase c : {MixingCase::strong, MixingCase::weak}) {
        try {
          const double f = enhanced_rate_factor(in, c).rate_factor;
          (c == MixingCase::strong ? row.strong_factor : row.weak_factor) = f;
        } catch (const NumericalError& e) {
          result.warnings.push_back("nu=" + format_double(m.nu) + " " + to_string(c) + ": " + e.what());
        } catch (const DomainError& e) {
          result.warnings.push_back("nu=" + format_double(m.nu) + " " + to_string(c) + ": " + e.what());
        }
      }
    }
    if (m.reached) {
      x.push_back(std::log(m.nu));
      y.push_back(std::log(m.kappa));
    } else {
      result.warnings.push_back("nu=" + format_double(m.nu) +
                                ": threshold not reached, excluded from the fit");
    }
    result.rows.push_back(row);
  }
  double span = 0.0;
  if (x.size() >= 2) {
    span = (*std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end())) / std::log(10.0);
  }
  if (x.size() < 3) {
    result.warnings.push_back("fit rejected: needs at least 3 reached nu values");
  } else if (span < 1.0 - 1e-9) {
    result.warnings.push_back("fit rejected: nu values span less than one decade");
  } else {
    result.fit = linear_fit(x, y);
  }
  result.measurements = std::move(measurements);
  return result;
}

SweepResult nu_sweep(const ExperimentConfig& config, const LabOptions& options) {
  return sweep_from_measurements(config, measure_kappa(config, options));
}

Lemma41Report verify_lemma41(const ExperimentConfig& config, double nu, double d_p) {
  config.validate();
  const VelocityField flow = config.velocity();
  const Grid grid = config.grid();
  const ScalarField theta0 = make_initial(grid, config.initial_spec());
  const double s = config.s_list.front();
  const double horizon = config.lemma41_horizon;
  const double cadence = config.cadence > 0.0 ? config.cadence : horizon / 100.0;

  Lemma41Report report;
  BoundInputs in = config.bound_inputs(nu, std::max(theta0.l2_norm(), 1e-300));
  const double override_dp = d_p > 0.0 ? d_p : config.lemma41_dp;
  report.d_p = override_dp > 0.0 ? override_dp : d_p_constant(config.p);
  report.grad_theta0_p = grad_lp_norm(theta0, config.p);

  Solver solver(config.solver(nu));
  SolverState state = SolverState::from_field(theta0, s);
  const Transporter transporter(grid, flow, config.solver(nu).transport);
  std::vector<double> phi(theta0.values().begin(), theta0.values().end());

  report.passed = true;
  double t_prev = s;
  for (std::int64_t k = 0;; ++k) {
    const double t = std::min(s + static_cast<double>(k) * cadence, s + horizon);
    solver.advance_to(state, t);
    transporter.advance(phi, t_prev, t);
    t_prev = t;
    double dist = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double e = state.values[i] - phi[i];
      dist += e * e;
    }
    dist *= grid.weight();
    const double bound = transport_distance_bound(in, report.grad_theta0_p, t - s, report.d_p);
    report.rows.push_back({t, dist, bound});
    if (dist > bound) report.passed = false;
    if (bound > 0.0) report.worst_ratio = std::max(report.worst_ratio, dist / bound);
    else if (dist > 0.0) report.worst_ratio = std::numeric_limits<double>::infinity();
    if (t >= s + horizon) break;
  }
  return report;
}

std::vector<BoundPair> bound_reports(const ExperimentConfig& config, double theta0_l2) {
  std::vector<BoundPair> out;
  for (double nu : config.nu_list) {
    BoundPair pair;
    const BoundInputs in = config.bound_inputs(nu, theta0_l2);
    for (MixingCase c : {MixingCase::strong, MixingCase::weak}) {
      try {
        (c == MixingCase::strong ? pair.strong : pair.weak) = enhanced_rate_factor(in, c);
      } catch (const NumericalError& e) {
        pair.warnings.push_back(to_string(c) + ": " + e.what());
      }
    }
    out.push_back(std::move(pair));
  }
  return out;
}

ComparisonReport compare_bounds(const SweepResult& sweep, const std::vector<BoundPair>& bounds) {
  if (bounds.size() != sweep.rows.size()) {
    throw DomainError("compare_bounds: sweep and bound reports have different nu grids");
  }
  ComparisonReport report;
  report.all_within_trivial = true;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const SweepRow& r = sweep.rows[i];
    const BoundPair& b = bounds[i];
    if ((b.strong && b.strong->trivial != r.trivial && std::abs(b.strong->trivial / r.trivial - 1.0) > 1e-12)) {
      throw DomainError("compare_bounds: bound report does not match the sweep nu grid");
    }
    ComparisonRow row;
    row.nu = r.nu;
    row.measured = r.kappa;
    row.reached = r.reached;
    row.trivial = r.trivial;
    if (b.strong) row.strong_factor = b.strong->rate_factor;
    if (b.weak) row.weak_factor = b.weak->rate_factor;
    row.within_trivial = r.kappa <= 1.05 * r.trivial;
    report.all_within_trivial = report.all_within_trivial && row.within_trivial;
    if (b.strong && b.strong->delta && !report.delta_strong) report.delta_strong = b.strong->delta;
    if (b.weak && b.weak->delta && !report.delta_weak) report.delta_weak = b.weak->delta;
    report.rows.push_back(row);
  }
  if (sweep.fit) report.measured_slope = sweep.fit->slope;
  return report;
}

std::string to_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"nu", r.nu},
                    {"measured", r.measured},
                    {"reached", r.reached},
                    {"trivial", r.trivial},
                    {"strong_factor", optional_number(r.strong_factor)},
                    {"weak_factor", optional_number(r.weak_factor)},
                    {"within_trivial", r.within_trivial}});
  }
  json j = {{"schema_version", kRunRecordSchemaVersion},
            {"rows", rows},
            {"measured_slope", optional_number(report.measured_slope)},
            {"delta_strong", optional_number(report.delta_strong)},
            {"delta_weak", optional_number(report.delta_weak)},
            {"all_within_trivial", report.all_within_trivial}};
  return j.dump(2);
}

ComparisonReport comparison_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("comparison report: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != kRunRecordSchemaVersion) {
      throw FormatError("comparison report: unsupported schema version");
    }
    ComparisonReport report;
    for (const auto& r : j.at("rows")) {
      ComparisonRow row;
      row.nu = r.at("nu").get<double>();
      row.measured = r.at("measured").get<double>();
      row.reached = r.at("reached").get<bool>();
      row.trivial = r.at("trivial").get<double>();
      row.strong_factor = number_or_null(r, "strong_factor");
      row.weak_factor = number_or_null(r, "weak_factor");
      row.within_trivial = r.at("within_trivial").get<bool>();
      report.rows.push_back(row);
    }
    report.measured_slope = number_or_null(j, "measured_slope");
    report.delta_strong = number_or_null(j, "delta_strong");
    report.delta_weak = number_or_null(j, "delta_weak");
    report.all_within_trivial = j.at("all_within_trivial").get<bool>();
    return report;
  } catch (const json::exception& e) {
    throw FormatError(std::string("comparison report: ") + e.what());
  }
}

std::string to_json(const BoundReport& r) {
  json j = {{"case", to_string(r.mixing_case)},
            {"d_p", r.d_p},
            {"trivial", r.trivial},
            {"threshold_h", r.threshold_h},
            {"script_h", r.script_h},
            {"rate_factor", r.rate_factor},
            {"lambda_n", r.lambda_n},
            {"enhancement_active", r.enhancement_active},
            {"delta", optional_number(r.delta)},
            {"search",
             {{"bracket", {r.search.bracket_lo, r.search.bracket_hi}},
              {"iterations", r.search.iterations},
              {"residual", r.search.residual},
              {"argmin", r.search.argmin},
              {"fallback_scan", r.search.fallback_scan},
              {"warnings", r.search.warnings}}}};
  return j.dump(2);
}

std::string to_json(const MixingReport& r) {
  json j = {{"functional", r.functional},   {"pairs", r.pairs},
            {"worst_ratio", r.worst_ratio}, {"worst_time", r.worst_time},
            {"passed", r.passed},           {"inconclusive", r.inconclusive},
            {"times", r.times},             {"worst_ratio_at", r.worst_ratio_at}};
  return j.dump(2);
}

MixingRateResult run_mixing_rate(const ExperimentConfig& config) {
  config.validate();
  const Grid grid = config.grid();
  const VelocityField flow = config.velocity();
  const ScalarField f = make_initial(grid, config.initial_spec());
  std::vector<double> times(static_cast<std::size_t>(config.mixing_samples));
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = config.mixing_horizon * static_cast<double>(i) / static_cast<double>(times.size() - 1);
  }
  TransportOptions transport;
  transport.spline_degree = config.interp_degree;

  MixingRateResult result;
  result.series = mixing_series(flow, f, times, config.mixing_beta, transport);
  std::vector<double> ft, fv;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const bool usable = result.series.reliable[i] && result.series.values[i] > 0.0 &&
                        (config.mixing_law != RateFunction::Law::power || times[i] > 0.0);
    if (usable) {
      ft.push_back(times[i]);
      fv.push_back(result.series.values[i]);
    }
  }
  if (ft.size() < times.size()) {
    result.warnings.push_back(std::to_string(times.size() - ft.size()) +
                              " samples excluded from the fit (resolution guard or nonpositive)");
  }
  if (ft.size() >= 8) {
    result.fit = fit_rate(ft, fv, config.mixing_law);
    if (result.fit->rate) {
      MixingCheckOptions opt;
      opt.horizon = config.mixing_horizon;
      opt.seed = config.seed;
      opt.transport = transport;
      result.strong = verify_strong(flow, grid, *result.fit->rate, config.mixing_alpha,
                                    config.mixing_beta, static_cast<std::size_t>(config.mixing_pairs), opt);
    } else {
      result.warnings.push_back("fitted rate is not decreasing; no mixing check");
    }
  } else {
    result.warnings.push_back("fewer than 8 usable samples; fit skipped");
  }
  return result;
}

}  // namespace plaplab
