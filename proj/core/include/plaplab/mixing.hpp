#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plaplab/rate_function.hpp"
#include "plaplab/scalar_field.hpp"
#include "plaplab/transport.hpp"

namespace plaplab {

/// Above this fraction of spectral energy in the outer half of the resolved
/// band, an advected field is flagged as under-resolved.
inline constexpr double kResolutionGuard = 0.10;

struct MixingSeries {
  std::vector<double> times;
  std::vector<double> values;
  /// False where the advected field failed the resolution guard.
  std::vector<bool> reliable;
};

/// Negative Sobolev norms of f o phi_{0,t} at the given nondecreasing times >= 0.
MixingSeries mixing_series(const VelocityField& flow, const ScalarField& f,
                           std::span<const double> times, double beta,
                           const TransportOptions& transport = {});

struct RateFit {
  RateFunction::Law law = RateFunction::Law::exponential;
  /// power: (c, q); exponential: (c1, c2).
  double first = 0.0;
  double second = 0.0;
  double r_squared = 0.0;
  std::size_t count = 0;
  /// Present when the fitted parameters describe a decreasing rate.
  std::optional<RateFunction> rate;
};

/// Least squares in log space: log h against log t (power) or t (exponential).
RateFit fit_rate(std::span<const double> times, std::span<const double> values,
                 RateFunction::Law law);

struct MixingCheckOptions {
  double s = 0.0;
  /// Checked on t - s in (0, horizon].
  double horizon = 10.0;
  std::size_t time_steps = 200;
  std::uint64_t seed = 7;
  /// Spectral support of the random pairs; 0 selects n / 4.
  int band = 0;
  TransportOptions transport;
};

struct MixingReport {
  std::string functional;  // "strong" or "weak"
  std::vector<double> times;
  /// Max over pairs of the normalized functional at each time.
  std::vector<double> worst_ratio_at;
  double worst_ratio = 0.0;
  double worst_time = 0.0;
  std::size_t pairs = 0;
  bool passed = false;
  /// Some advected sample failed the resolution guard.
  bool inconclusive = false;
};

/// |<f o phi_{s,t}, g>| at each time, transporting f incrementally.
std::vector<double> advected_inner_products(const VelocityField& flow, const ScalarField& f,
                                            const ScalarField& g, double s,
                                            std::span<const double> times,
                                            const TransportOptions& transport,
                                            bool* under_resolved = nullptr);

/// Max over random pairs and times of |<f o phi_{s,t}, g>| / (h(t-s) |f|_{H^alpha} |g|_{H^beta}).
MixingReport verify_strong(const VelocityField& flow, const Grid& grid, const RateFunction& h,
                           double alpha, double beta, std::size_t sample_count,
                           const MixingCheckOptions& options = {});

/// As verify_strong with the time-averaged functional
/// ((1/(t-s)) int_s^t |<f o phi_{s,r}, g>|^2 dr)^{1/2}, trapezoid rule in r.
MixingReport verify_weak(const VelocityField& flow, const Grid& grid, const RateFunction& h,
                         double alpha, double beta, std::size_t sample_count,
                         const MixingCheckOptions& options = {});

}  // namespace plaplab
