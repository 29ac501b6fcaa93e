#pragma once

#include <utility>

#include <Eigen/Dense>

#include "blindhd/errors.hpp"

namespace blindhd {

enum class PriorKind { cauchy_diff, tv_diff };

struct PriorConfig {
    PriorKind kind = PriorKind::cauchy_diff;
    double alpha = 1.0;              // regularisation scale
    double tv_smoothing_eps = 1e-6;  // |d| -> sqrt(d^2 + eps^2) while optimising
    std::pair<double, double> log_tau_bounds{-5.0, 0.0};
};

// Sum over increments d_i = log_ell[i] - log_ell[i-1] of the Cauchy(0, alpha)
// log density, sum_i [-log(pi alpha) - log(1 + (d_i/alpha)^2)].
// No term on the first element (flat start).
double cauchy_diff_logpdf(const Eigen::VectorXd& log_ell, double alpha);

// Laplace(0, alpha) increments, sum_i [-log(2 alpha) - rho_eps(d_i)/alpha]
// with rho_eps(d) = sqrt(d^2 + eps^2); eps = 0 is the exact density.
double tv_diff_logpdf(const Eigen::VectorXd& log_ell, double alpha, double eps);

// Uniform on [bounds.first, bounds.second]; -inf outside (rejection
// sentinel; the optimizer's box keeps iterates inside the support).
double log_tau_logpdf(double log_tau, std::pair<double, double> bounds);

// Dispatch on prior.kind, tv smoothing taken from the config.
double prior_logpdf(const Eigen::VectorXd& log_ell, const PriorConfig& prior);

// d prior_logpdf / d log_ell
Eigen::VectorXd prior_grad(const Eigen::VectorXd& log_ell,
                           const PriorConfig& prior);

} // namespace blindhd
