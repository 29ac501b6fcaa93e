#include <doctest.h>

#include <cmath>

#include "blindhd/hyperpriors.hpp"
#include "blindhd/rng.hpp"
#include "oracles.hpp"

using namespace blindhd;

TEST_CASE("cauchy difference prior worked examples") {
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, 1.7);
    CHECK(cauchy_diff_logpdf(flat, 1.0) ==
          doctest::Approx(-2.2894597716988003).epsilon(1e-14));

    Eigen::VectorXd one_step(2);
    for (double alpha : {0.5, 1.0, 3.0}) {
        one_step << 0.0, alpha;  // single increment d = alpha
        CHECK(cauchy_diff_logpdf(one_step, alpha) ==
              doctest::Approx(-std::log(M_PI * alpha) - std::log(2.0))
                  .epsilon(1e-14));
    }

    CHECK_THROWS_AS(cauchy_diff_logpdf(Eigen::VectorXd::Constant(1, 0.0), 1.0),
                    TooShort);
}

TEST_CASE("tv difference prior worked examples") {
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, -0.4);
    CHECK(tv_diff_logpdf(flat, 1.0, 0.0) ==
          doctest::Approx(-1.3862943611198906).epsilon(1e-14));

    Eigen::VectorXd one_step(2);
    for (double alpha : {0.5, 1.0, 3.0}) {
        one_step << 1.0, 1.0 + alpha;
        CHECK(tv_diff_logpdf(one_step, alpha, 0.0) ==
              doctest::Approx(-std::log(2.0 * alpha) - 1.0).epsilon(1e-13));
    }

    // smoothing perturbs a constant field by exactly (n-1) eps / alpha
    const int n = 100;
    const double eps = 1e-6;
    const Eigen::VectorXd big_flat = Eigen::VectorXd::Constant(n, 0.3);
    for (double alpha : {1.0, 10.0}) {
        const double delta = tv_diff_logpdf(big_flat, alpha, eps) -
                             tv_diff_logpdf(big_flat, alpha, 0.0);
        CHECK(delta == doctest::Approx(-(n - 1) * eps / alpha).epsilon(1e-10));
    }
    // at alpha = 10 the perturbation is below 1e-5
    CHECK(std::abs(tv_diff_logpdf(big_flat, 10.0, eps) -
                   tv_diff_logpdf(big_flat, 10.0, 0.0)) < 1e-5);

    CHECK_THROWS_AS(tv_diff_logpdf(Eigen::VectorXd::Constant(1, 0.0), 1.0, 0.0),
                    TooShort);
}

TEST_CASE("uniform log tau prior") {
    const std::pair<double, double> bounds{-5.0, 0.0};
    CHECK(log_tau_logpdf(-2.5, bounds) ==
          doctest::Approx(-1.6094379124341003).epsilon(1e-14));
    CHECK(log_tau_logpdf(0.5, bounds) ==
          -std::numeric_limits<double>::infinity());
    CHECK(log_tau_logpdf(-6.0, bounds) ==
          -std::numeric_limits<double>::infinity());
    CHECK(log_tau_logpdf(-4.9, bounds) == log_tau_logpdf(-0.1, bounds));
}

TEST_CASE("difference priors match term-by-term scalar oracles") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 30);
        const double alpha = std::exp(rng.uniform(-2.0, 2.0));
        Eigen::VectorXd field(n);
        for (int i = 0; i < n; ++i) field(i) = rng.uniform(-4.0, 4.0);

        double want_cauchy = 0.0, want_tv = 0.0;
        for (int i = 1; i < n; ++i) {
            const double d = field(i) - field(i - 1);
            want_cauchy += oracles::cauchy_term(d, alpha);
            want_tv += oracles::laplace_term(d, alpha);
        }
        CHECK(cauchy_diff_logpdf(field, alpha) ==
              doctest::Approx(want_cauchy).epsilon(1e-12));
        CHECK(tv_diff_logpdf(field, alpha, 0.0) ==
              doctest::Approx(want_tv).epsilon(1e-12));
    }
}

TEST_CASE("increment priors are translation invariant and reversible") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 20);
        Eigen::VectorXd field(n);
        for (int i = 0; i < n; ++i) field(i) = rng.uniform(-3.0, 3.0);
        const Eigen::VectorXd shifted =
            field.array() + 3.7;  // constant offset
        const Eigen::VectorXd reversed = field.reverse();

        for (double alpha : {0.3, 1.0}) {
            CHECK(cauchy_diff_logpdf(shifted, alpha) ==
                  doctest::Approx(cauchy_diff_logpdf(field, alpha))
                      .epsilon(1e-10));
            CHECK(tv_diff_logpdf(shifted, alpha, 0.0) ==
                  doctest::Approx(tv_diff_logpdf(field, alpha, 0.0))
                      .epsilon(1e-10));
            CHECK(cauchy_diff_logpdf(reversed, alpha) ==
                  doctest::Approx(cauchy_diff_logpdf(field, alpha))
                      .epsilon(1e-12));
            CHECK(tv_diff_logpdf(reversed, alpha, 0.0) ==
                  doctest::Approx(tv_diff_logpdf(field, alpha, 0.0))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("constant field beats same-endpoint perturbations under both priors") {
    Rng rng(29);
    const int n = 12;
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(n, 0.9);
    const double base_cauchy = cauchy_diff_logpdf(flat, 1.0);
    const double base_tv = tv_diff_logpdf(flat, 1.0, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd bumpy = flat;
        for (int i = 1; i + 1 < n; ++i) bumpy(i) += rng.uniform(-1.0, 1.0);
        CHECK(cauchy_diff_logpdf(bumpy, 1.0) < base_cauchy);
        CHECK(tv_diff_logpdf(bumpy, 1.0, 0.0) < base_tv);
    }
}

TEST_CASE("prior gradients match finite differences") {
    Rng rng(31);
    const int n = 9;
    Eigen::VectorXd field(n);
    for (int i = 0; i < n; ++i) field(i) = rng.uniform(-2.0, 2.0);

    for (PriorKind kind : {PriorKind::cauchy_diff, PriorKind::tv_diff}) {
        PriorConfig prior;
        prior.kind = kind;
        prior.alpha = 0.7;
        prior.tv_smoothing_eps = 1e-6;
        const Eigen::VectorXd grad = prior_grad(field, prior);
        const double h = 1e-6;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd up = field, down = field;
            up(i) += h;
            down(i) -= h;
            const double fd =
                (prior_logpdf(up, prior) - prior_logpdf(down, prior)) /
                (2.0 * h);
            CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}
