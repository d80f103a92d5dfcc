#include "plaplab/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plaplab/errors.hpp"

namespace plaplab {

RateFunction::RateFunction(Law law, double a, double b, std::vector<std::pair<double, double>> table)
    : law_(law), a_(a), b_(b), table_(std::move(table)) {}

RateFunction RateFunction::power(double c, double q) {
  if (!(c > 0.0) || !(q > 0.0) || !std::isfinite(c) || !std::isfinite(q)) {
    throw DomainError("power-law rate needs c > 0 and q > 0");
  }
  return RateFunction(Law::power, c, q, {});
}

RateFunction RateFunction::exponential(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw DomainError("exponential rate needs c1 > 0 and c2 > 0");
  }
  return RateFunction(Law::exponential, c1, c2, {});
}

RateFunction RateFunction::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw DomainError("tabulated rate needs at least two samples");
  if (samples.front().first < 0.0) throw DomainError("tabulated rate: times must be nonnegative");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second > 0.0)) throw DomainError("tabulated rate: values must be positive");
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw DomainError("tabulated rate: times must be strictly increasing");
    }
    if (i > 0 && !(samples[i].second < samples[i - 1].second)) {
      throw DomainError("tabulated rate: values must be strictly decreasing");
    }
  }
  for (auto& [t, h] : samples) h = std::log(h);
  return RateFunction(Law::tabulated, 0.0, 0.0, std::move(samples));
}

double RateFunction::table_log(double t) const {
  // Segment containing t, clamped to the end segments for extrapolation.
  auto it = std::upper_bound(table_.begin(), table_.end(), t,
                             [](double x, const auto& e) { return x < e.first; });
  std::size_t hi = static_cast<std::size_t>(it - table_.begin());
  hi = std::clamp<std::size_t>(hi, 1, table_.size() - 1);
  const auto& [t0, l0] = table_[hi - 1];
  const auto& [t1, l1] = table_[hi];
  return l0 + (l1 - l0) * (t - t0) / (t1 - t0);
}

double RateFunction::operator()(double t) const {
  switch (law_) {
    case Law::power:
      return t > 0.0 ? a_ * std::pow(t, -b_) : std::numeric_limits<double>::infinity();
    case Law::exponential: return a_ * std::exp(-b_ * t);
    case Law::tabulated: return std::exp(table_log(t));
  }
  return 0.0;
}

double RateFunction::sup_value() const {
  switch (law_) {
    case Law::power: return std::numeric_limits<double>::infinity();
    case Law::exponential: return a_;
    case Law::tabulated: return std::exp(table_log(0.0));
  }
  return 0.0;
}

bool RateFunction::in_range(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) return false;
  return law_ == Law::power ? true : y <= sup_value();
}

double RateFunction::inverse(double y) const {
  if (!in_range(y)) {
    std::ostringstream msg;
    msg << "rate inverse: " << y << " is outside the range of " << describe();
    throw DomainError(msg.str());
  }
  switch (law_) {
    case Law::power: return std::pow(a_ / y, 1.0 / b_);
    case Law::exponential: return std::max(0.0, std::log(a_ / y) / b_);
    case Law::tabulated: {
      const double ly = std::log(y);
      // Log values decrease along the table; find the segment bracketing ly.
      std::size_t hi = 1;
      while (hi + 1 < table_.size() && table_[hi].second > ly) ++hi;
      const auto& [t0, l0] = table_[hi - 1];
      const auto& [t1, l1] = table_[hi];
      return std::max(0.0, t0 + (ly - l0) * (t1 - t0) / (l1 - l0));
    }
  }
  return 0.0;
}

RateFunction RateFunction::scaled(double k) const {
  if (!(k > 0.0)) throw DomainError("rate scaling must be positive");
  if (law_ == Law::tabulated) {
    auto table = table_;
    for (auto& e : table) e.second += std::log(k);
    return RateFunction(Law::tabulated, 0.0, 0.0, std::move(table));
  }
  return RateFunction(law_, a_ * k, b_, {});
}

std::string RateFunction::describe() const {
  std::ostringstream out;
  out.precision(6);
  switch (law_) {
    case Law::power: out << "power(c=" << a_ << ", q=" << b_ << ")"; break;
    case Law::exponential: out << "exponential(c1=" << a_ << ", c2=" << b_ << ")"; break;
    case Law::tabulated: out << "tabulated(" << table_.size() << " samples)"; break;
  }
  return out.str();
}

std::string to_string(RateFunction::Law law) {
  switch (law) {
    case RateFunction::Law::power: return "power";
    case RateFunction::Law::exponential: return "exponential";
    case RateFunction::Law::tabulated: return "tabulated";
  }
  return "?";
}

RateFunction::Law rate_law_from_string(const std::string& name) {
  if (name == "power") return RateFunction::Law::power;
  if (name == "exponential") return RateFunction::Law::exponential;
  if (name == "tabulated") return RateFunction::Law::tabulated;
  throw DomainError("unknown rate law '" + name + "'");
}

}  // namespace plaplab
