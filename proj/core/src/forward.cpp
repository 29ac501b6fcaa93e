#include "blindhd/forward.hpp"

#include <cmath>

#include "blindhd/rng.hpp"

namespace blindhd {

Segment Segment::bump(double from, double to, double center, double width,
                      double height) {
    Segment s;
    s.kind = Kind::gaussian_bump;
    s.from = from;
    s.to = to;
    s.center = center;
    s.width = width;
    s.height = height;
    return s;
}

Segment Segment::ramp(double from, double to, double start_value,
                      double end_value) {
    Segment s;
    s.kind = Kind::linear_ramp;
    s.from = from;
    s.to = to;
    s.start_value = start_value;
    s.end_value = end_value;
    return s;
}

Segment Segment::flat(double from, double to, double value) {
    Segment s;
    s.kind = Kind::constant;
    s.from = from;
    s.to = to;
    s.value = value;
    return s;
}

double Segment::eval(double x) const {
    switch (kind) {
        case Kind::gaussian_bump: {
            const double z = (x - center) / width;
            return height * std::exp(-0.5 * z * z);
        }
        case Kind::linear_ramp:
            return start_value +
                   (end_value - start_value) * (x - from) / (to - from);
        case Kind::constant:
            return value;
    }
    return 0.0;
}

SignalSpec SignalSpec::default_spec() {
    // Smooth spike, linear ramp, and piecewise-constant plateaus with
    // full-height jumps. The spike is wider than the blur kernels under
    // study and the jumps are tall, so the kernel width stays identifiable.
    SignalSpec spec;
    spec.domain_start = 0.0;
    spec.domain_end = 5.0;
    spec.pieces = {
        Segment::bump(0.0, 1.5, 0.75, 0.25, 1.0),
        Segment::flat(1.5, 2.0, 0.0),
        Segment::ramp(2.0, 3.0, 0.0, 1.0),
        Segment::flat(3.0, 3.6, 1.0),
        Segment::flat(3.6, 4.3, 0.0),
        Segment::flat(4.3, 5.0, 0.4),
    };
    return spec;
}

void SignalSpec::validate() const {
    if (pieces.empty()) throw Error("SignalSpec: no segments");
    if (!(domain_end > domain_start))
        throw Error("SignalSpec: empty domain");
    const double tol = 1e-12;
    if (std::abs(pieces.front().from - domain_start) > tol ||
        std::abs(pieces.back().to - domain_end) > tol)
        throw Error("SignalSpec: segments do not cover the domain");
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].to > pieces[i].from))
            throw Error("SignalSpec: segment with nonpositive length");
        if (i > 0 && std::abs(pieces[i].from - pieces[i - 1].to) > tol)
            throw Error("SignalSpec: segments overlap or leave a gap");
    }
}

double gaussian_kernel(double x, double tau) {
    if (!(tau > 0.0)) throw InvalidTau("gaussian_kernel: tau must be positive");
    const double z = x / tau;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * M_PI) * tau);
}

ConvolutionOperator build_operator(const Grid& grid, double tau,
                                   bool normalize) {
    if (!(tau > 0.0)) throw InvalidTau("build_operator: tau must be positive");
    const int n = grid.size();
    ConvolutionOperator op;
    op.tau = tau;
    op.grid = grid;
    op.normalized = normalize;
    op.matrix.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            op.matrix(i, j) =
                grid.spacing *
                gaussian_kernel(grid.points(i) - grid.points(j), tau);
    if (normalize) {
        const Eigen::VectorXd row_sums = op.matrix.rowwise().sum();
        op.matrix.array().colwise() /= row_sums.array();
    }
    return op;
}

Eigen::MatrixXd operator_tau_derivative(const Grid& grid, double tau,
                                        bool normalize) {
    if (!(tau > 0.0))
        throw InvalidTau("operator_tau_derivative: tau must be positive");
    const int n = grid.size();
    Eigen::MatrixXd w(n, n), dw(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = grid.points(i) - grid.points(j);
            const double val = grid.spacing * gaussian_kernel(d, tau);
            w(i, j) = val;
            // d phi/d tau = phi (d^2/tau^3 - 1/tau)
            dw(i, j) = val * (d * d / (tau * tau * tau) - 1.0 / tau);
        }
    }
    if (!normalize) return dw;
    const Eigen::VectorXd row = w.rowwise().sum();
    const Eigen::VectorXd drow = dw.rowwise().sum();
    Eigen::MatrixXd a = w.array().colwise() / row.array();
    return ((dw.array() - a.array().colwise() * drow.array()).colwise() /
            row.array())
        .matrix();
}

Eigen::VectorXd evaluate_signal(const SignalSpec& spec, const Grid& grid) {
    spec.validate();
    const double tol = 1e-12;
    if (grid.start() < spec.domain_start - tol ||
        grid.end() > spec.domain_end + tol)
        throw OutOfDomain("evaluate_signal: grid leaves the signal domain");

    Eigen::VectorXd f(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.points(i);
        const Segment* hit = nullptr;
        for (const auto& seg : spec.pieces) {
            // right-continuous: [from, to), last segment closed
            if (x >= seg.from - tol &&
                (x < seg.to || (&seg == &spec.pieces.back() && x <= seg.to + tol))) {
                hit = &seg;
                break;
            }
        }
        if (!hit) throw OutOfDomain("evaluate_signal: point not covered");
        f(i) = hit->eval(x);
    }
    return f;
}

Dataset simulate(const SignalSpec& spec, int fine_n, int coarse_n, double tau,
                 double noise_percent, std::uint64_t seed) {
    if (coarse_n < 2 || fine_n < coarse_n || fine_n % coarse_n != 0)
        throw GridMismatch("simulate: fine_n must be a multiple of coarse_n");
    if (noise_percent < 0.0)
        throw Error("simulate: noise_percent must be >= 0");

    const Grid fine = Grid::uniform(spec.domain_start, spec.domain_end, fine_n);
    const int stride = fine_n / coarse_n;

    Dataset ds;
    ds.fine_truth = evaluate_signal(spec, fine);
    ds.coarse_grid = fine.subsample(stride);
    ds.true_tau = tau;
    ds.noise_percent = noise_percent;
    ds.seed = seed;

    const ConvolutionOperator fine_op = build_operator(fine, tau, true);
    const Eigen::VectorXd blurred = fine_op.matrix * ds.fine_truth;

    Eigen::VectorXd noiseless(coarse_n);
    ds.coarse_truth.resize(coarse_n);
    for (int i = 0; i < coarse_n; ++i) {
        noiseless(i) = blurred(i * stride);
        ds.coarse_truth(i) = ds.fine_truth(i * stride);
    }

    ds.sigma = noise_percent * noiseless.cwiseAbs().maxCoeff();
    if (ds.sigma > 0.0) {
        Rng rng(seed);
        ds.g = noiseless + ds.sigma * rng.normal_vector(coarse_n);
    } else {
        ds.g = noiseless;
    }
    return ds;
}

double relative_mse(const Eigen::VectorXd& estimate,
                    const Eigen::VectorXd& truth) {
    if (estimate.size() != truth.size())
        throw DimensionMismatch("relative_mse: length mismatch");
    const double denom = truth.squaredNorm();
    if (denom == 0.0) throw ZeroTruth("relative_mse: truth has zero norm");
    return 100.0 * (estimate - truth).squaredNorm() / denom;
}

} // namespace blindhd
