#pragma once

#include <limits>

#include <Eigen/Dense>

#include "blindhd/covariance.hpp"
#include "blindhd/forward.hpp"
#include "blindhd/hyperpriors.hpp"

namespace blindhd {

// theta = (log length-scale field, log kernel width)
struct HyperParams {
    Eigen::VectorXd log_ell;
    double log_tau = 0.0;

    Eigen::VectorXd pack() const;  // [log_ell; log_tau]
    static HyperParams unpack(const Eigen::VectorXd& theta);
};

struct Reconstruction {
    Eigen::VectorXd posterior_mean;
    Eigen::MatrixXd posterior_cov;  // symmetrised
    double tau_hat = 0.0;
    double alpha_used = std::numeric_limits<double>::quiet_NaN();
    double final_objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double jitter_used = 0.0;
};

// log p(g | theta) = -(n/2) log(2 pi) - (1/2) log det(S) - (1/2) g^T S^{-1} g
// with S = A C A^T + sigma^2 I. The explicit-matrix overload is the
// computational core; the HyperParams overload assembles A (row-normalised)
// and C from the grid first. S is factored once and shared between the
// log-determinant and the quadratic form.
double marginal_loglik(const Eigen::VectorXd& g, const Eigen::MatrixXd& A,
                       const Eigen::MatrixXd& C, double sigma);
double marginal_loglik(const Eigen::VectorXd& g, const HyperParams& hp,
                       const Grid& grid, double sigma, const MaternConfig& cfg);

// marginal_loglik + difference-prior logpdf + log tau logpdf, up to the
// normalising constant of the data.
double hyper_log_posterior(const Eigen::VectorXd& g, const HyperParams& hp,
                           const PriorConfig& prior, const Grid& grid,
                           double sigma, const MaternConfig& cfg);

// Closed-form Gaussian conditional posterior of the signal:
//   mean = C A^T S^{-1} g,   cov = C - C A^T S^{-1} A C
// evaluated at the supplied (typically MAP) hyperparameters.
Reconstruction conditional_posterior(const Eigen::VectorXd& g,
                                     const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C, double sigma);
Reconstruction conditional_posterior(const Eigen::VectorXd& g,
                                     const HyperParams& hp_map,
                                     const Grid& grid, double sigma,
                                     const MaternConfig& cfg);

// Analytic gradient of hyper_log_posterior with respect to
// theta = [log_ell; log_tau], using
//   dL/dtheta_k = 1/2 [ a^T (dS/dtheta_k) a - tr(S^{-1} dS/dtheta_k) ],
//   a = S^{-1} g,
// with rank-two structure in the length-scale directions. nu = 1.5 only.
Eigen::VectorXd hyper_log_posterior_grad(const Eigen::VectorXd& g,
                                         const HyperParams& hp,
                                         const PriorConfig& prior,
                                         const Grid& grid, double sigma,
                                         const MaternConfig& cfg);

// Scalar-length-scale objective for the stationary baseline:
// marginal_loglik with a constant field plus the uniform log tau prior.
double stationary_log_posterior(const Eigen::VectorXd& g, double log_ell,
                                double log_tau,
                                std::pair<double, double> log_tau_bounds,
                                const Grid& grid, double sigma,
                                const MaternConfig& cfg);

} // namespace blindhd
