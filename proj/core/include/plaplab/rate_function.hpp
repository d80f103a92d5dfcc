#pragma once

#include <string>
#include <utility>
#include <vector>

namespace plaplab {

/// Strictly decreasing mixing rate h(t) vanishing at infinity, with inverse.
///
///  - power:       h(t) = c / t^q on (0, inf)
///  - exponential: h(t) = c1 exp(-c2 t)
///  - tabulated:   log h interpolated linearly in t between samples and
///                 extrapolated along the end segments (so it stays
///                 exponential-like outside the table)
class RateFunction {
 public:
  enum class Law { power, exponential, tabulated };

  static RateFunction power(double c, double q);
  static RateFunction exponential(double c1, double c2);
  /// Samples (t, h) with t strictly increasing from >= 0 and h strictly decreasing, h > 0.
  static RateFunction tabulated(std::vector<std::pair<double, double>> samples);

  Law law() const { return law_; }
  /// power: (c, q); exponential: (c1, c2); tabulated: unused.
  double first() const { return a_; }
  double second() const { return b_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  double operator()(double t) const;
  /// h(0+): infinite for the power law.
  double sup_value() const;
  /// True when y lies in the range of h over t in [0, inf).
  bool in_range(double y) const;
  /// h^{-1}(y); DomainError outside the range.
  double inverse(double y) const;
  /// k * h.
  RateFunction scaled(double k) const;

  std::string describe() const;

 private:
  RateFunction(Law law, double a, double b, std::vector<std::pair<double, double>> table);
  double table_log(double t) const;

  Law law_;
  double a_;
  double b_;
  std::vector<std::pair<double, double>> table_;  // (t, log h)
};

std::string to_string(RateFunction::Law law);
RateFunction::Law rate_law_from_string(const std::string& name);

}  // namespace plaplab
