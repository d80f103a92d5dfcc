#include "plaplab/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plaplab/errors.hpp"
#include "plaplab/fft.hpp"

namespace plaplab {

double sample_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_l2(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum / static_cast<double>(values.size()));
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  spectrum_ = fft::forward(grid_, values_);
  spectrum_[0] = 0.0;
}

ScalarField ScalarField::from_values(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw DomainError("ScalarField: expected " + std::to_string(grid.size()) + " samples, got " +
                      std::to_string(values.size()));
  }
  const double mean = sample_mean(values);
  const double scale = std::max(1.0, sample_l2(values));
  if (!(std::abs(mean) <= kMeanTolerance * scale)) {
    throw DomainError("ScalarField: samples are not mean-zero (mean = " + std::to_string(mean) +
                      ")");
  }
  return ScalarField(grid, std::move(values));
}

ScalarField ScalarField::centered(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw DomainError("ScalarField: sample count does not match grid");
  }
  const double mean = sample_mean(values);
  for (double& v : values) v -= mean;
  return ScalarField(grid, std::move(values));
}

ScalarField ScalarField::from_spectrum(const Grid& grid, std::vector<Complex> spectrum) {
  if (spectrum.size() != grid.size()) {
    throw DomainError("ScalarField: spectrum size does not match grid");
  }
  spectrum[0] = 0.0;
  return centered(grid, fft::inverse(grid, spectrum));
}

ScalarField ScalarField::zero(const Grid& grid) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
}

double ScalarField::l2_norm() const { return sample_l2(values_); }

double ScalarField::mean() const { return sample_mean(values_); }

double inner_product(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw DomainError("inner_product: grids differ");
  const auto a = f.values();
  const auto b = g.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * f.grid().weight();
}

}  // namespace plaplab
