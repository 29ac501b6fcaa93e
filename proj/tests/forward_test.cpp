#include <doctest.h>

#include <cmath>

#include "blindhd/forward.hpp"
#include "blindhd/rng.hpp"
#include "oracles.hpp"

using namespace blindhd;

TEST_CASE("gaussian kernel values and symmetry") {
    CHECK(gaussian_kernel(0.0, 0.25) ==
          doctest::Approx(1.5957691216057308).epsilon(1e-14));
    for (double tau : {0.1, 0.25, 0.7}) {
        CHECK(gaussian_kernel(tau, tau) ==
              doctest::Approx(std::exp(-0.5) / (std::sqrt(2.0 * M_PI) * tau))
                  .epsilon(1e-14));
    }
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(-4.0, 4.0);
        CHECK(gaussian_kernel(-x, 0.4) == gaussian_kernel(x, 0.4));
    }
    CHECK_THROWS_AS(gaussian_kernel(1.0, 0.0), InvalidTau);
    CHECK_THROWS_AS(gaussian_kernel(1.0, -0.5), InvalidTau);
}

TEST_CASE("normalised operator is row stochastic and nearly local for tiny tau") {
    const Grid grid = Grid::uniform(0.0, 5.0, 120);
    const ConvolutionOperator op = build_operator(grid, 0.3, true);
    CHECK((op.matrix.array() >= 0.0).all());
    const Eigen::VectorXd rows = op.matrix.rowwise().sum();
    for (int i = 0; i < grid.size(); ++i)
        CHECK(rows(i) == doctest::Approx(1.0).epsilon(1e-12));

    // constant in, constant out
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(grid.size(), 0.8);
    CHECK(((op.matrix * c) - c).cwiseAbs().maxCoeff() <= 1e-12);

    // tau = spacing/10: blur does almost nothing to a smooth signal
    const ConvolutionOperator sharp =
        build_operator(grid, grid.spacing / 10.0, true);
    Eigen::VectorXd f(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        f(i) = std::sin(grid.points(i)) + 2.0;
    CHECK(((sharp.matrix * f) - f).cwiseAbs().maxCoeff() /
              f.cwiseAbs().maxCoeff() <=
          0.01);
}

TEST_CASE("interior rows of the raw operator integrate to one") {
    const Grid grid = Grid::uniform(0.0, 5.0, 300);
    for (double tau : {0.1, 0.25}) {
        const ConvolutionOperator raw = build_operator(grid, tau, false);
        const Eigen::VectorXd rows = raw.matrix.rowwise().sum();
        int checked = 0;
        for (int i = 0; i < grid.size(); ++i) {
            const double x = grid.points(i);
            if (std::min(x - grid.start(), grid.end() - x) < 5.0 * tau)
                continue;  // kernel truncated by the boundary
            CHECK(rows(i) == doctest::Approx(1.0).epsilon(1e-6));
            ++checked;
        }
        CHECK(checked > 50);
    }
}

TEST_CASE("signal evaluation over the default piecewise definition") {
    const SignalSpec spec = SignalSpec::default_spec();
    spec.validate();

    Grid probe;
    probe.points.resize(4);
    probe.points << 0.75, 2.5, 4.6, 1.75;
    probe.spacing = 1.0;  // not equidistant; evaluate_signal does not care

    Eigen::VectorXd vals(4);
    for (int i = 0; i < 4; ++i) {
        Grid single = Grid::uniform(probe.points(i), probe.points(i) + 0.1, 2);
        vals(i) = evaluate_signal(spec, single)(0);
    }
    CHECK(vals(0) == doctest::Approx(1.0).epsilon(1e-14));  // spike centre
    CHECK(vals(1) == doctest::Approx(0.5).epsilon(1e-14));  // ramp midpoint
    CHECK(vals(2) == doctest::Approx(0.4).epsilon(1e-14));  // plateau
    CHECK(vals(3) == doctest::Approx(0.0).epsilon(1e-14));  // flat zero

    const Grid outside = Grid::uniform(-1.0, 1.0, 5);
    CHECK_THROWS_AS(evaluate_signal(spec, outside), OutOfDomain);
}

TEST_CASE("simulate: determinism, exact noiseless path, grid nesting") {
    const SignalSpec spec = SignalSpec::default_spec();

    const Dataset quiet = simulate(spec, 300, 100, 0.25, 0.0, 42);
    CHECK(quiet.sigma == 0.0);
    // noiseless g equals the subsampled fine-grid convolution bit for bit
    const Grid fine = Grid::uniform(0.0, 5.0, 300);
    const Eigen::VectorXd blurred =
        build_operator(fine, 0.25, true).matrix * evaluate_signal(spec, fine);
    for (int i = 0; i < 100; ++i) CHECK(quiet.g(i) == blurred(3 * i));

    const Dataset a = simulate(spec, 300, 100, 0.25, 0.01, 7);
    const Dataset b = simulate(spec, 300, 100, 0.25, 0.01, 7);
    CHECK((a.g - b.g).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.sigma == b.sigma);

    // coarse grid points are exactly every 3rd fine point
    for (int i = 0; i < 100; ++i)
        CHECK(a.coarse_grid.points(i) == fine.points(3 * i));
    a.coarse_grid.validate();

    CHECK_THROWS_AS(simulate(spec, 301, 100, 0.25, 0.01, 1), GridMismatch);
}

TEST_CASE("noise calibration matches the declared sigma") {
    const SignalSpec spec = SignalSpec::default_spec();
    const Dataset base = simulate(spec, 60, 20, 0.25, 0.0, 0);
    const double target_sigma = 0.01 * base.g.cwiseAbs().maxCoeff();

    // the sampler behind simulate: zero-mean unit-variance, 1e4 draws
    {
        Rng rng(123);
        const int draws = 10000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double z = rng.normal();
            sum += z;
            sumsq += z * z;
        }
        const double mean = sum / draws;
        const double sd = std::sqrt(sumsq / draws - mean * mean);
        CHECK(std::abs(sd - 1.0) <= 0.05);
        CHECK(std::abs(mean) <= 0.05);
    }

    // end to end: pooled residual std over repeated simulations
    {
        double sumsq = 0.0;
        int count = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const Dataset noisy = simulate(spec, 60, 20, 0.25, 0.01, seed);
            CHECK(noisy.sigma == doctest::Approx(target_sigma));
            const Eigen::VectorXd resid = noisy.g - base.g;
            sumsq += resid.squaredNorm();
            count += static_cast<int>(resid.size());
        }
        const double sd = std::sqrt(sumsq / count);
        CHECK(std::abs(sd - target_sigma) <= 0.05 * target_sigma);
    }
}

TEST_CASE("inversion operator is not the fine operator restricted") {
    const Grid fine = Grid::uniform(0.0, 5.0, 300);
    const Grid coarse = fine.subsample(3);
    const Eigen::MatrixXd coarse_op = build_operator(coarse, 0.25, true).matrix;
    const Eigen::MatrixXd fine_op = build_operator(fine, 0.25, true).matrix;

    Eigen::MatrixXd restricted(100, 100);
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) restricted(i, j) = fine_op(3 * i, 3 * j);
    CHECK((coarse_op - restricted).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("wider kernels produce smoother measurements") {
    const SignalSpec spec = SignalSpec::default_spec();
    const Grid fine = Grid::uniform(0.0, 5.0, 300);
    const Eigen::VectorXd truth = evaluate_signal(spec, fine);
    double prev_tv = oracles::total_variation(truth);
    for (double tau : {0.1, 0.25, 0.5}) {
        const Eigen::VectorXd blurred =
            build_operator(fine, tau, true).matrix * truth;
        const double tv = oracles::total_variation(blurred);
        CHECK(tv <= prev_tv + 1e-12);
        prev_tv = tv;
    }
}

TEST_CASE("relative mse definition") {
    Eigen::VectorXd truth(4);
    truth << 1, -2, 3, 0.5;
    CHECK(relative_mse(truth, truth) == 0.0);
    CHECK(relative_mse(Eigen::VectorXd::Zero(4), truth) ==
          doctest::Approx(100.0));
    CHECK(relative_mse(1.1 * truth, truth) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(relative_mse(Eigen::VectorXd::Zero(3), truth),
                    DimensionMismatch);
    CHECK_THROWS_AS(relative_mse(truth, Eigen::VectorXd::Zero(4)), ZeroTruth);
}
