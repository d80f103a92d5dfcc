#include "plaplab/statistics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "plaplab/errors.hpp"

namespace plaplab {

double student_t975(std::size_t dof) {
  if (dof == 0) throw DomainError("student_t975: needs at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("linear_fit: x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("linear_fit: needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("linear_fit: x values are all equal");
  LinearFit fit;
  fit.count = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  if (n > 2) {
    fit.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
    fit.slope_ci95 = student_t975(n - 2) * fit.slope_stderr;
  }
  return fit;
}

}  // namespace plaplab
