#pragma once

#include <Eigen/Dense>

#include "blindhd/grid.hpp"

namespace blindhd {

struct MaternConfig {
    double magnitude = 1.0;   // gamma^2, marginal variance
    double smoothness = 1.5;  // nu
};

// Matern correlation 2^{1-nu}/Gamma(nu) * s^nu * K_nu(s), value 1 at s = 0.
// nu = 1.5 takes the closed form (1+s) e^{-s}; other orders go through the
// generic Bessel evaluation (reference quality, not the hot path).
double matern_correlation(double s, double nu);

// Non-stationary Matern covariance over the grid:
//   C(i,j) = gamma^2 (l_i l_j)^{1/4} / L_ij * matern_correlation(|x_i - x_j| / L_ij, nu)
//   L_ij   = sqrt((l_i + l_j)/2),  l = exp(log_ell)
// The upper triangle is assembled and mirrored, so the output is exactly
// symmetric; diagonal entries are exactly gamma^2.
Eigen::MatrixXd build_nonstationary(const Grid& grid,
                                    const Eigen::VectorXd& log_ell,
                                    const MaternConfig& cfg);

// Constant-field special case, the 2-parameter baseline entry point.
Eigen::MatrixXd build_stationary(const Grid& grid, double log_ell,
                                 const MaternConfig& cfg);

// Column k of dC/d(log_ell[k]), the only nonzero row/column of that
// derivative; entry k itself is zero (the diagonal is constant).
// Closed form for nu = 1.5 only; used by the analytic gradient.
Eigen::VectorXd nonstationary_grad_col(const Grid& grid,
                                       const Eigen::VectorXd& log_ell,
                                       const MaternConfig& cfg, int k);

} // namespace blindhd
