#pragma once

#include <cstdint>
#include <vector>

#include "plaplab/eigen_table.hpp"
#include "plaplab/scalar_field.hpp"

namespace plaplab {

/// Homogeneous Sobolev norm (sum over k != 0 of (4 pi^2 |k|^2)^order |c_k|^2)^{1/2}.
/// Any real order is allowed; order 0 is the L2 norm.
double sobolev_norm(const ScalarField& f, double order);

/// Orthogonal projection onto the first `modes` real eigenfunctions of the
/// table's ordered basis.
ScalarField project_low(const ScalarField& f, const EigenTable& table, std::int64_t modes);

/// Spectral partial derivatives, one field per dimension.
std::vector<ScalarField> gradient(const ScalarField& f);

/// (integral |grad f|^p dx)^{1/p} by grid quadrature; requires p > 2.
double grad_lp_norm(const ScalarField& f, double p);

namespace detail {
/// Same quadrature without the p > 2 domain check (p >= 1).
double grad_lp_norm_any(const ScalarField& f, double p);
}  // namespace detail

/// Fraction of spectral energy in modes with max |k_i| > n/4.
double high_mode_fraction(const ScalarField& f);

}  // namespace plaplab
