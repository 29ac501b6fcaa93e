#include "blindhd/covariance.hpp"

#include <cmath>

namespace blindhd {

double matern_correlation(double s, double nu) {
    if (!(nu > 0.0))
        throw InvalidSmoothness("matern_correlation: nu must be positive");
    if (s < 0.0) throw Error("matern_correlation: distance must be >= 0");
    if (s == 0.0) return 1.0;
    if (nu == 1.5) return (1.0 + s) * std::exp(-s);
    if (s < 1e-10) return 1.0;  // generic path: limit value, K_nu blows up
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(s, nu) *
           std::cyl_bessel_k(nu, s);
}

Eigen::MatrixXd build_nonstationary(const Grid& grid,
                                    const Eigen::VectorXd& log_ell,
                                    const MaternConfig& cfg) {
    const int n = grid.size();
    if (log_ell.size() != n)
        throw DimensionMismatch(
            "build_nonstationary: field length does not match grid");
    if (!(cfg.magnitude > 0.0))
        throw Error("build_nonstationary: magnitude must be positive");

    const Eigen::VectorXd ell = log_ell.array().exp();
    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < n; ++i) {
        C(i, i) = cfg.magnitude;
        for (int j = i + 1; j < n; ++j) {
            const double mean_ell = 0.5 * (ell(i) + ell(j));
            const double coupled = std::sqrt(mean_ell);
            const double pref =
                cfg.magnitude * std::pow(ell(i) * ell(j), 0.25) / coupled;
            const double s =
                std::abs(grid.points(i) - grid.points(j)) / coupled;
            const double v = pref * matern_correlation(s, cfg.smoothness);
            C(i, j) = v;
            C(j, i) = v;
        }
    }
    return C;
}

Eigen::MatrixXd build_stationary(const Grid& grid, double log_ell,
                                 const MaternConfig& cfg) {
    return build_nonstationary(
        grid, Eigen::VectorXd::Constant(grid.size(), log_ell), cfg);
}

Eigen::VectorXd nonstationary_grad_col(const Grid& grid,
                                       const Eigen::VectorXd& log_ell,
                                       const MaternConfig& cfg, int k) {
    const int n = grid.size();
    if (log_ell.size() != n)
        throw DimensionMismatch(
            "nonstationary_grad_col: field length does not match grid");
    if (cfg.smoothness != 1.5)
        throw InvalidSmoothness(
            "nonstationary_grad_col: closed form requires nu = 1.5");
    if (k < 0 || k >= n)
        throw DimensionMismatch("nonstationary_grad_col: index out of range");

    // C_kj = gamma^2 (uv)^{1/4} m^{-1/2} (1+s) e^{-s},  m = (u+v)/2,
    // s = d/sqrt(m).  d/du:
    //   dP/du  = P (1/(4u) - 1/(4m))
    //   ds/du  = -s/(4m),  d[(1+s)e^{-s}]/ds = -s e^{-s}
    // so  u dC/du = u P e^{-s} [ (1/(4u) - 1/(4m))(1+s) + s^2/(4m) ].
    const Eigen::VectorXd ell = log_ell.array().exp();
    const double u = ell(k);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const double v = ell(j);
        const double m = 0.5 * (u + v);
        const double coupled = std::sqrt(m);
        const double pref = cfg.magnitude * std::pow(u * v, 0.25) / coupled;
        const double s = std::abs(grid.points(k) - grid.points(j)) / coupled;
        const double bracket =
            (1.0 / (4.0 * u) - 1.0 / (4.0 * m)) * (1.0 + s) +
            s * s / (4.0 * m);
        r(j) = u * pref * std::exp(-s) * bracket;
    }
    return r;
}

} // namespace blindhd
