#pragma once

// Independent reference implementations used only to check the library.
// None of these call the code paths they verify.

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "blindhd/rng.hpp"

namespace oracles {

// Matern correlation straight from the Bessel-function definition.
inline double matern_bessel(double s, double nu) {
    if (s == 0.0) return 1.0;
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(s, nu) *
           std::cyl_bessel_k(nu, s);
}

// Multivariate normal log density at g for N(0, S), via eigendecomposition
// rather than a Cholesky factor.
inline double mvn_logpdf(const Eigen::VectorXd& g, const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    const Eigen::VectorXd evals = eig.eigenvalues();
    const Eigen::VectorXd z = eig.eigenvectors().transpose() * g;
    double logdet = 0.0, quad = 0.0;
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        logdet += std::log(evals(i));
        quad += z(i) * z(i) / evals(i);
    }
    const double n = static_cast<double>(g.size());
    return -0.5 * (n * std::log(2.0 * M_PI) + logdet + quad);
}

// Information-form Gaussian posterior: cov = (C^{-1} + A^T A / s^2)^{-1},
// mean = cov A^T g / s^2. Brute-force dense inverses.
struct PosteriorOracle {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

inline PosteriorOracle information_form_posterior(const Eigen::VectorXd& g,
                                                  const Eigen::MatrixXd& A,
                                                  const Eigen::MatrixXd& C,
                                                  double sigma) {
    const Eigen::MatrixXd Cinv = C.fullPivLu().inverse();
    const Eigen::MatrixXd precision =
        Cinv + A.transpose() * A / (sigma * sigma);
    PosteriorOracle out;
    out.cov = precision.fullPivLu().inverse();
    out.mean = out.cov * (A.transpose() * g) / (sigma * sigma);
    return out;
}

// Scalar log densities evaluated in one shot (different arithmetic route
// from the summed implementation).
inline double cauchy_term(double d, double alpha) {
    return std::log(1.0 / (M_PI * alpha * (1.0 + (d / alpha) * (d / alpha))));
}

inline double laplace_term(double d, double alpha) {
    return std::log(std::exp(-std::abs(d) / alpha) / (2.0 * alpha));
}

inline double eig_logdet(const Eigen::MatrixXd& S) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S)
        .eigenvalues()
        .array()
        .log()
        .sum();
}

inline Eigen::MatrixXd random_spd(blindhd::Rng& rng, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
    return m.transpose() * m + Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_matrix(blindhd::Rng& rng, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

inline Eigen::VectorXd random_vector(blindhd::Rng& rng, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

// Total variation of a discrete signal.
inline double total_variation(const Eigen::VectorXd& v) {
    double tv = 0.0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        tv += std::abs(v(i) - v(i - 1));
    return tv;
}

} // namespace oracles
