#include "blindhd/hyperpriors.hpp"

#include <cmath>
#include <limits>

namespace blindhd {

namespace {

void check_field(const Eigen::VectorXd& log_ell, double alpha) {
    if (log_ell.size() < 2)
        throw TooShort("difference prior: field needs at least 2 entries");
    if (!(alpha > 0.0)) throw Error("difference prior: alpha must be positive");
}

} // namespace

double cauchy_diff_logpdf(const Eigen::VectorXd& log_ell, double alpha) {
    check_field(log_ell, alpha);
    const double log_norm = -std::log(M_PI * alpha);
    double total = 0.0;
    for (Eigen::Index i = 1; i < log_ell.size(); ++i) {
        const double d = (log_ell(i) - log_ell(i - 1)) / alpha;
        total += log_norm - std::log1p(d * d);
    }
    return total;
}

double tv_diff_logpdf(const Eigen::VectorXd& log_ell, double alpha,
                      double eps) {
    check_field(log_ell, alpha);
    if (eps < 0.0) throw Error("tv_diff_logpdf: eps must be >= 0");
    const double log_norm = -std::log(2.0 * alpha);
    double total = 0.0;
    for (Eigen::Index i = 1; i < log_ell.size(); ++i) {
        const double d = log_ell(i) - log_ell(i - 1);
        const double rho = (eps == 0.0) ? std::abs(d) : std::sqrt(d * d + eps * eps);
        total += log_norm - rho / alpha;
    }
    return total;
}

double log_tau_logpdf(double log_tau, std::pair<double, double> bounds) {
    if (!(bounds.second > bounds.first))
        throw Error("log_tau_logpdf: bounds out of order");
    if (log_tau < bounds.first || log_tau > bounds.second)
        return -std::numeric_limits<double>::infinity();
    return -std::log(bounds.second - bounds.first);
}

double prior_logpdf(const Eigen::VectorXd& log_ell, const PriorConfig& prior) {
    switch (prior.kind) {
        case PriorKind::cauchy_diff:
            return cauchy_diff_logpdf(log_ell, prior.alpha);
        case PriorKind::tv_diff:
            return tv_diff_logpdf(log_ell, prior.alpha, prior.tv_smoothing_eps);
    }
    throw Error("prior_logpdf: unknown prior kind");
}

Eigen::VectorXd prior_grad(const Eigen::VectorXd& log_ell,
                           const PriorConfig& prior) {
    check_field(log_ell, prior.alpha);
    const double alpha = prior.alpha;
    const Eigen::Index n = log_ell.size();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i < n; ++i) {
        const double d = log_ell(i) - log_ell(i - 1);
        double dterm = 0.0;  // d(log density of increment)/dd
        if (prior.kind == PriorKind::cauchy_diff) {
            dterm = -2.0 * d / (alpha * alpha + d * d);
        } else {
            const double eps = prior.tv_smoothing_eps;
            const double rho = std::sqrt(d * d + eps * eps);
            dterm = (rho == 0.0) ? 0.0 : -d / (alpha * rho);
        }
        grad(i) += dterm;
        grad(i - 1) -= dterm;
    }
    return grad;
}

} // namespace blindhd
