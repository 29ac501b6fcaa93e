#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "blindhd/grid.hpp"

namespace blindhd {

// One piece of the piecewise ground-truth signal, defined on [from, to).
// The last segment of a SignalSpec also covers its right endpoint.
struct Segment {
    enum class Kind { gaussian_bump, linear_ramp, constant };

    Kind kind = Kind::constant;
    double from = 0.0;
    double to = 0.0;
    double center = 0.0, width = 1.0, height = 0.0;  // gaussian_bump
    double start_value = 0.0, end_value = 0.0;       // linear_ramp
    double value = 0.0;                              // constant

    static Segment bump(double from, double to, double center, double width,
                        double height);
    static Segment ramp(double from, double to, double start_value,
                        double end_value);
    static Segment flat(double from, double to, double value);

    double eval(double x) const;
};

struct SignalSpec {
    double domain_start = 0.0;
    double domain_end = 1.0;
    std::vector<Segment> pieces;

    // Smooth spike, linear ramp and piecewise-constant plateaus on [0, 5].
    static SignalSpec default_spec();

    // Segments must partition [domain_start, domain_end] in order.
    void validate() const;
};

// Discretised convolution A[i][j] = spacing * phi(x_i - x_j; tau), with
// optional row renormalisation to unit sum (truncated-kernel boundary fix).
struct ConvolutionOperator {
    Eigen::MatrixXd matrix;
    double tau = 0.0;
    Grid grid;
    bool normalized = false;
};

// Noisy measurement plus everything needed to reproduce it.
struct Dataset {
    Grid coarse_grid;
    Eigen::VectorXd g;
    double sigma = 0.0;          // noise standard deviation actually used
    double true_tau = 0.0;
    double noise_percent = 0.0;  // fraction of max |noiseless measurement|
    std::uint64_t seed = 0;
    Eigen::VectorXd fine_truth;  // empty when loaded from disk
    Eigen::VectorXd coarse_truth;
};

// phi(x; tau) = exp(-x^2 / (2 tau^2)) / sqrt(2 pi tau^2)
double gaussian_kernel(double x, double tau);

ConvolutionOperator build_operator(const Grid& grid, double tau,
                                   bool normalize);

// d/d tau of the operator matrix (same normalisation convention).
Eigen::MatrixXd operator_tau_derivative(const Grid& grid, double tau,
                                        bool normalize);

Eigen::VectorXd evaluate_signal(const SignalSpec& spec, const Grid& grid);

// Generates the fine-grid truth, convolves with the normalised fine-grid
// operator, subsamples every (fine_n/coarse_n)-th point starting at index 0,
// and adds seeded i.i.d. Gaussian noise with standard deviation
// noise_percent * max |subsampled noiseless measurement|.
Dataset simulate(const SignalSpec& spec, int fine_n, int coarse_n, double tau,
                 double noise_percent, std::uint64_t seed);

// 100 * ||estimate - truth||^2 / ||truth||^2
double relative_mse(const Eigen::VectorXd& estimate,
                    const Eigen::VectorXd& truth);

} // namespace blindhd
