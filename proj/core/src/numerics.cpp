#include "blindhd/numerics.hpp"

#include <cmath>

namespace blindhd {

SpdFactor cholesky_with_jitter(const Eigen::MatrixXd& S, double jitter0,
                               int k_max) {
    const auto n = S.rows();
    if (n == 0 || S.cols() != n)
        throw DimensionMismatch("cholesky_with_jitter: matrix must be square");

    const double scale = S.cwiseAbs().maxCoeff();
    const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * (scale > 0.0 ? scale : 1.0))
        throw NotSymmetric("cholesky_with_jitter: input is not symmetric");

    // Remove accumulation asymmetry before factorising.
    Eigen::MatrixXd sym = 0.5 * (S + S.transpose());

    if (jitter0 <= 0.0) jitter0 = 1e-10 * sym.diagonal().mean();
    if (!(jitter0 > 0.0)) jitter0 = 1e-10;

    SpdFactor f;
    f.dim = static_cast<int>(n);
    for (int k = -1; k <= k_max; ++k) {
        const double jitter = (k < 0) ? 0.0 : jitter0 * std::pow(10.0, k);
        Eigen::MatrixXd trial = sym;
        trial.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(trial);
        if (llt.info() == Eigen::Success) {
            f.lower = llt.matrixL();
            f.jitter_used = jitter;
            return f;
        }
    }
    throw NotPositiveDefinite(
        "cholesky_with_jitter: factorisation failed at the largest jitter");
}

double log_det(const SpdFactor& f) {
    return 2.0 * f.lower.diagonal().array().log().sum();
}

Eigen::VectorXd solve_spd(const SpdFactor& f, const Eigen::VectorXd& b) {
    if (b.size() != f.dim)
        throw DimensionMismatch("solve_spd: right-hand side has wrong length");
    Eigen::VectorXd y = f.lower.triangularView<Eigen::Lower>().solve(b);
    return f.lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd solve_spd(const SpdFactor& f, const Eigen::MatrixXd& B) {
    if (B.rows() != f.dim)
        throw DimensionMismatch("solve_spd: right-hand side has wrong rows");
    Eigen::MatrixXd y = f.lower.triangularView<Eigen::Lower>().solve(B);
    return f.lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

} // namespace blindhd
