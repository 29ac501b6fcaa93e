#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "blindhd/errors.hpp"

namespace blindhd {

enum class GradientMode { finite_difference, analytic };

struct OptConfig {
    int max_iterations = 2000;
    GradientMode gradient_mode = GradientMode::finite_difference;
    double fd_step = 1e-5;
    double convergence_tol = 1e-9;  // relative objective change
    int memory = 10;                // quasi-Newton history length
    std::pair<double, double> box_log_ell{-std::log(1000.0), std::log(1000.0)};
    std::pair<double, double> box_log_tau{-5.0, 0.0};
    double init_log_ell = 0.0;
    double init_log_tau = -1.5;
    int restarts = 0;
};

struct OptResult {
    Eigen::VectorXd x;
    double final_objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // non-decreasing
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Central differences, one coordinate at a time.
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                            double step);

// Box-constrained limited-memory BFGS ascent. Every iterate is clipped to
// [lower, upper]; line search accepts only improving steps, so the trace is
// non-decreasing. grad is consulted in analytic mode only; otherwise the
// gradient comes from central differences of step cfg.fd_step. With
// restarts > 0 the search reruns from seeded jittered initial points and
// the best result wins. Throws NonFiniteObjective if the objective is
// non-finite at the initial point or step halving cannot restore finiteness.
OptResult maximize(const Objective& f, const std::optional<Gradient>& grad,
                   const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper, const OptConfig& cfg,
                   std::uint64_t seed = 0);

// Max discrepancy between grad and central differences at point, scaled by
// max(1, ||grad||_inf, ||fd||_inf).
double gradient_check(const Objective& f, const Gradient& grad,
                      const Eigen::VectorXd& point, double fd_step);

} // namespace blindhd
