#pragma once

#include <Eigen/Dense>

#include "hartree/grid.hpp"

namespace hartree {

/// Mode-ell part of f -> |x|^{-(n-2)} * f for densities supported in B_R.
///
/// Both backends return psi with -Delta_ell psi = (n-2) omega_n f and exact
/// exterior decay r^{-(ell+n-2)} beyond R.

/// Dense matrix K with psi = K f, through the decay boundary-value problem.
Eigen::MatrixXd convolution_matrix_bvp(const RadialGrid& g, int ell);

RadialField convolve_mode_bvp(const RadialField& density);

/// Direct quadrature of the mode kernel
/// (n-2) omega_n / (2 ell + n - 2) r_<^ell / r_>^{ell+n-2}.
/// exterior_moment adds int_R^inf s^{1-ell} f(s) ds for densities extending past R.
RadialField convolve_mode_kernel(const RadialField& density, double exterior_moment = 0.0);

/// Exterior continuation of a mode-ell potential at r >= R.
double exterior_value(const RadialField& psi, double r);

}  // namespace hartree
