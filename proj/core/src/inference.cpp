#include "blindhd/inference.hpp"

#include <cmath>

#include "blindhd/numerics.hpp"

namespace blindhd {

Eigen::VectorXd HyperParams::pack() const {
    Eigen::VectorXd theta(log_ell.size() + 1);
    theta.head(log_ell.size()) = log_ell;
    theta(log_ell.size()) = log_tau;
    return theta;
}

HyperParams HyperParams::unpack(const Eigen::VectorXd& theta) {
    if (theta.size() < 2)
        throw DimensionMismatch("HyperParams::unpack: too short");
    HyperParams hp;
    hp.log_ell = theta.head(theta.size() - 1);
    hp.log_tau = theta(theta.size() - 1);
    return hp;
}

namespace {

struct ModelMatrices {
    Eigen::MatrixXd A;  // row-normalised convolution operator
    Eigen::MatrixXd C;  // non-stationary covariance
};

ModelMatrices assemble(const HyperParams& hp, const Grid& grid,
                       const MaternConfig& cfg) {
    ModelMatrices m;
    m.C = build_nonstationary(grid, hp.log_ell, cfg);
    m.A = build_operator(grid, std::exp(hp.log_tau), true).matrix;
    return m;
}

SpdFactor factor_marginal(const Eigen::VectorXd& g, const Eigen::MatrixXd& A,
                          const Eigen::MatrixXd& C, double sigma) {
    const auto n = g.size();
    if (A.rows() != n || A.cols() != n || C.rows() != n || C.cols() != n)
        throw DimensionMismatch("marginal covariance: dimensions inconsistent");
    if (!(sigma > 0.0)) throw Error("marginal covariance: sigma must be > 0");
    Eigen::MatrixXd S = A * C * A.transpose();
    S.diagonal().array() += sigma * sigma;
    return cholesky_with_jitter(S);
}

} // namespace

double marginal_loglik(const Eigen::VectorXd& g, const Eigen::MatrixXd& A,
                       const Eigen::MatrixXd& C, double sigma) {
    const SpdFactor f = factor_marginal(g, A, C, sigma);
    const Eigen::VectorXd x = solve_spd(f, g);
    const double n = static_cast<double>(g.size());
    return -0.5 * n * std::log(2.0 * M_PI) - 0.5 * log_det(f) -
           0.5 * g.dot(x);
}

double marginal_loglik(const Eigen::VectorXd& g, const HyperParams& hp,
                       const Grid& grid, double sigma,
                       const MaternConfig& cfg) {
    const ModelMatrices m = assemble(hp, grid, cfg);
    return marginal_loglik(g, m.A, m.C, sigma);
}

double hyper_log_posterior(const Eigen::VectorXd& g, const HyperParams& hp,
                           const PriorConfig& prior, const Grid& grid,
                           double sigma, const MaternConfig& cfg) {
    const double tau_term = log_tau_logpdf(hp.log_tau, prior.log_tau_bounds);
    if (!std::isfinite(tau_term)) return tau_term;
    return marginal_loglik(g, hp, grid, sigma, cfg) +
           prior_logpdf(hp.log_ell, prior) + tau_term;
}

Reconstruction conditional_posterior(const Eigen::VectorXd& g,
                                     const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C, double sigma) {
    const SpdFactor f = factor_marginal(g, A, C, sigma);
    const Eigen::MatrixXd cross = C * A.transpose();  // C A^T

    Reconstruction r;
    r.posterior_mean = cross * solve_spd(f, g);
    Eigen::MatrixXd cov =
        C - cross * solve_spd(f, Eigen::MatrixXd(cross.transpose()));
    r.posterior_cov = 0.5 * (cov + cov.transpose());
    r.jitter_used = f.jitter_used;
    return r;
}

Reconstruction conditional_posterior(const Eigen::VectorXd& g,
                                     const HyperParams& hp_map,
                                     const Grid& grid, double sigma,
                                     const MaternConfig& cfg) {
    const ModelMatrices m = assemble(hp_map, grid, cfg);
    Reconstruction r = conditional_posterior(g, m.A, m.C, sigma);
    r.tau_hat = std::exp(hp_map.log_tau);
    return r;
}

Eigen::VectorXd hyper_log_posterior_grad(const Eigen::VectorXd& g,
                                         const HyperParams& hp,
                                         const PriorConfig& prior,
                                         const Grid& grid, double sigma,
                                         const MaternConfig& cfg) {
    const int n = grid.size();
    if (hp.log_ell.size() != n)
        throw DimensionMismatch("hyper_log_posterior_grad: field/grid mismatch");
    const double tau = std::exp(hp.log_tau);

    const Eigen::MatrixXd C = build_nonstationary(grid, hp.log_ell, cfg);
    const Eigen::MatrixXd A = build_operator(grid, tau, true).matrix;
    const SpdFactor f = factor_marginal(g, A, C, sigma);

    const Eigen::MatrixXd Sinv =
        solve_spd(f, Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)));
    const Eigen::VectorXd a = Sinv * g;          // S^{-1} g
    const Eigen::VectorXd w = A.transpose() * a; // A^T a
    const Eigen::MatrixXd G = A.transpose() * Sinv * A;

    Eigen::VectorXd grad(n + 1);

    // Length-scale directions: dC/d(log ell_k) = e_k r^T + r e_k^T, so
    // dS = u v^T + v u^T with u = A e_k, v = A r, and
    //   dL = (a.u)(a.v) - u^T S^{-1} v = w_k (w.r) - (G r)_k.
    for (int k = 0; k < n; ++k) {
        const Eigen::VectorXd r = nonstationary_grad_col(grid, hp.log_ell, cfg, k);
        grad(k) = w(k) * w.dot(r) - G.row(k).dot(r);
    }

    // Kernel width: dS/d(log tau) = tau (B C A^T + A C B^T), B = dA/dtau.
    const Eigen::MatrixXd B = operator_tau_derivative(grid, tau, true);
    const Eigen::MatrixXd cross = C * A.transpose();
    const double quad = (B.transpose() * a).dot(cross * a);
    const double trace = ((Sinv * B).array() * cross.transpose().array()).sum();
    grad(n) = tau * (quad - trace);

    grad.head(n) += prior_grad(hp.log_ell, prior);
    // uniform log tau prior: zero slope inside the box
    return grad;
}

double stationary_log_posterior(const Eigen::VectorXd& g, double log_ell,
                                double log_tau,
                                std::pair<double, double> log_tau_bounds,
                                const Grid& grid, double sigma,
                                const MaternConfig& cfg) {
    const double tau_term = log_tau_logpdf(log_tau, log_tau_bounds);
    if (!std::isfinite(tau_term)) return tau_term;
    const Eigen::MatrixXd C = build_stationary(grid, log_ell, cfg);
    const Eigen::MatrixXd A =
        build_operator(grid, std::exp(log_tau), true).matrix;
    return marginal_loglik(g, A, C, sigma) + tau_term;
}

} // namespace blindhd
