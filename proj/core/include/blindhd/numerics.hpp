#pragma once

#include <Eigen/Dense>

#include "blindhd/errors.hpp"

namespace blindhd {

// Cholesky factor of S + jitter*I for the smallest jitter on the ladder
// {0, jitter0, 10*jitter0, ..., 10^k_max * jitter0} that factorises.
struct SpdFactor {
    Eigen::MatrixXd lower;
    double jitter_used = 0.0;
    int dim = 0;
};

// S must be symmetric to 1e-8 relative tolerance; it is averaged with its
// transpose before factorisation. jitter0 <= 0 selects the scale-free
// default 1e-10 * mean(diag(S)).
SpdFactor cholesky_with_jitter(const Eigen::MatrixXd& S, double jitter0 = 0.0,
                               int k_max = 6);

// 2 * sum_i log(L_ii)
double log_det(const SpdFactor& f);

// Solves (S + jitter*I) x = b by forward/back substitution.
Eigen::VectorXd solve_spd(const SpdFactor& f, const Eigen::VectorXd& b);
Eigen::MatrixXd solve_spd(const SpdFactor& f, const Eigen::MatrixXd& B);

} // namespace blindhd
