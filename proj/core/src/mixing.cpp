#include "plaplab/mixing.hpp"

#include <algorithm>
#include <cmath>

#include "plaplab/errors.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/spectral.hpp"
#include "plaplab/statistics.hpp"

namespace plaplab {

MixingSeries mixing_series(const VelocityField& flow, const ScalarField& f,
                           std::span<const double> times, double beta,
                           const TransportOptions& transport) {
  if (!(beta > 0.0)) throw DomainError("mixing_series: beta must be positive");
  if (std::abs(f.mean()) > ScalarField::kMeanTolerance * std::max(1.0, f.l2_norm())) {
    throw DomainError("mixing_series: field is not mean-zero");
  }
  const Transporter transporter(f.grid(), flow, transport);
  MixingSeries out;
  std::vector<double> values(f.values().begin(), f.values().end());
  double t_prev = 0.0;
  for (double t : times) {
    if (t < t_prev) throw DomainError("mixing_series: times must be nondecreasing and >= 0");
    if (t == 0.0) {
      out.times.push_back(t);
      out.values.push_back(sobolev_norm(f, -beta));
      out.reliable.push_back(high_mode_fraction(f) <= kResolutionGuard);
      continue;
    }
    transporter.advance(values, t_prev, t);
    t_prev = t;
    const ScalarField g = ScalarField::centered(f.grid(), values);
    out.times.push_back(t);
    out.values.push_back(sobolev_norm(g, -beta));
    out.reliable.push_back(high_mode_fraction(g) <= kResolutionGuard);
  }
  return out;
}

RateFit fit_rate(std::span<const double> times, std::span<const double> values,
                 RateFunction::Law law) {
  if (times.size() != values.size()) throw DomainError("fit_rate: length mismatch");
  if (times.size() < 8) throw DomainError("fit_rate: needs at least 8 samples");
  if (law == RateFunction::Law::tabulated) throw DomainError("fit_rate: tabulated law has no parameters");
  std::vector<double> x(times.size()), y(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("fit_rate: samples must be positive");
    if (law == RateFunction::Law::power) {
      if (!(times[i] > 0.0)) throw DomainError("fit_rate: power-law fit needs positive times");
      x[i] = std::log(times[i]);
    } else {
      x[i] = times[i];
    }
    y[i] = std::log(values[i]);
  }
  const LinearFit lf = linear_fit(x, y);
  RateFit fit;
  fit.law = law;
  fit.first = std::exp(lf.intercept);
  fit.second = -lf.slope;
  fit.r_squared = lf.r_squared;
  fit.count = times.size();
  if (fit.second > 0.0) {
    fit.rate = law == RateFunction::Law::power ? RateFunction::power(fit.first, fit.second)
                                               : RateFunction::exponential(fit.first, fit.second);
  }
  return fit;
}

std::vector<double> advected_inner_products(const VelocityField& flow, const ScalarField& f,
                                            const ScalarField& g, double s,
                                            std::span<const double> times,
                                            const TransportOptions& transport,
                                            bool* under_resolved) {
  if (!(f.grid() == g.grid())) throw DomainError("advected_inner_products: grid mismatch");
  const Transporter transporter(f.grid(), flow, transport);
  std::vector<double> values(f.values().begin(), f.values().end());
  std::vector<double> out;
  out.reserve(times.size());
  double t_prev = s;
  const auto gv = g.values();
  for (double t : times) {
    if (t < t_prev) throw DomainError("advected_inner_products: times must be nondecreasing from s");
    transporter.advance(values, t_prev, t);
    t_prev = t;
    double dot = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) dot += values[i] * gv[i];
    out.push_back(std::abs(dot) * f.grid().weight());
    if (under_resolved != nullptr && t > s &&
        high_mode_fraction(ScalarField::centered(f.grid(), values)) > kResolutionGuard) {
      *under_resolved = true;
    }
  }
  return out;
}

namespace {

MixingReport verify(bool weak, const VelocityField& flow, const Grid& grid, const RateFunction& h,
                    double alpha, double beta, std::size_t sample_count,
                    const MixingCheckOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("mixing check: alpha must lie in (0, 1]");
  if (!(beta > 0.0)) throw DomainError("mixing check: beta must be positive");
  if (sample_count == 0) throw DomainError("mixing check: needs at least one sample pair");
  if (!(options.horizon > 0.0) || options.time_steps < 2) {
    throw DomainError("mixing check: horizon and time steps must be positive");
  }
  const int band = options.band > 0 ? options.band : grid.n() / 4;

  // Time grid includes s so the weak quadrature starts at r = s.
  std::vector<double> times(options.time_steps + 1);
  for (std::size_t i = 0; i <= options.time_steps; ++i) {
    times[i] = options.s + options.horizon * static_cast<double>(i) / static_cast<double>(options.time_steps);
  }

  MixingReport report;
  report.functional = weak ? "weak" : "strong";
  report.times.assign(times.begin() + 1, times.end());
  report.worst_ratio_at.assign(report.times.size(), 0.0);
  report.pairs = sample_count;

  for (std::size_t pair = 0; pair < sample_count; ++pair) {
    const ScalarField f = random_band_limited(grid, band, options.seed + 2 * pair);
    const ScalarField g = random_band_limited(grid, band, options.seed + 2 * pair + 1);
    const double scale = sobolev_norm(f, alpha) * sobolev_norm(g, beta);
    bool under = false;
    const auto ip = advected_inner_products(flow, f, g, options.s, times, options.transport, &under);
    report.inconclusive = report.inconclusive || under;
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      double functional = ip[i];
      if (weak) {
        integral += 0.5 * (times[i] - times[i - 1]) * (ip[i - 1] * ip[i - 1] + ip[i] * ip[i]);
        functional = std::sqrt(integral / (times[i] - options.s));
      }
      const double ratio = functional / (h(times[i] - options.s) * scale);
      report.worst_ratio_at[i - 1] = std::max(report.worst_ratio_at[i - 1], ratio);
    }
  }
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    if (report.worst_ratio_at[i] > report.worst_ratio) {
      report.worst_ratio = report.worst_ratio_at[i];
      report.worst_time = report.times[i];
    }
  }
  report.passed = report.worst_ratio <= 1.0;
  return report;
}

}  // namespace

MixingReport verify_strong(const VelocityField& flow, const Grid& grid, const RateFunction& h,
                           double alpha, double beta, std::size_t sample_count,
                           const MixingCheckOptions& options) {
  return verify(false, flow, grid, h, alpha, beta, sample_count, options);
}

MixingReport verify_weak(const VelocityField& flow, const Grid& grid, const RateFunction& h,
                         double alpha, double beta, std::size_t sample_count,
                         const MixingCheckOptions& options) {
  return verify(true, flow, grid, h, alpha, beta, sample_count, options);
}

}  // namespace plaplab
