#include "blindhd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "blindhd/io.hpp"
#include "blindhd/rng.hpp"
#include "blindhd/svg.hpp"

namespace blindhd {

namespace fs = std::filesystem;

RunConfig RunConfig::defaults() {
    RunConfig cfg;
    // 9 logarithmically spaced alphas from 1e-2 to 1e2
    cfg.alpha_grid.clear();
    for (int i = 0; i < 9; ++i)
        cfg.alpha_grid.push_back(std::pow(10.0, -2.0 + 0.5 * i));
    // The analytic gradient keeps the full grid search tractable; finite
    // differences remain the OptConfig default for plain maximize calls.
    cfg.opt.gradient_mode = GradientMode::analytic;
    return cfg;
}

void RunConfig::validate() const {
    signal.validate();
    if (coarse_n < 2 || fine_n < coarse_n || fine_n % coarse_n != 0)
        throw ConfigError("config: fine_n must be a multiple of coarse_n");
    if (tau_list.empty() || noise_list.empty())
        throw ConfigError("config: tau_list and noise_list must be non-empty");
    for (double t : tau_list)
        if (!(t > 0.0)) throw ConfigError("config: tau values must be positive");
    for (double nl : noise_list)
        if (nl < 0.0) throw ConfigError("config: noise values must be >= 0");
    if (alpha_grid.empty())
        throw ConfigError("config: alpha_grid must be non-empty");
    for (size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0.0))
            throw ConfigError("config: alpha values must be positive");
        if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
            throw ConfigError("config: alpha_grid must be strictly increasing");
    }
    if (!(matern.magnitude > 0.0) || !(matern.smoothness > 0.0))
        throw ConfigError("config: matern parameters must be positive");
    if (!(prior.alpha > 0.0))
        throw ConfigError("config: prior alpha must be positive");
    if (prior.tv_smoothing_eps < 0.0)
        throw ConfigError("config: tv_smoothing_eps must be >= 0");
    if (!(prior.log_tau_bounds.second > prior.log_tau_bounds.first) ||
        !(opt.box_log_ell.second > opt.box_log_ell.first) ||
        !(opt.box_log_tau.second > opt.box_log_tau.first))
        throw ConfigError("config: bounds out of order");
    if (opt.max_iterations < 1 || opt.memory < 1 || !(opt.fd_step > 0.0) ||
        !(opt.convergence_tol > 0.0) || opt.restarts < 0)
        throw ConfigError("config: invalid optimizer settings");
    if (output_dir.empty()) throw ConfigError("config: output_dir is empty");
}

bool ExperimentReport::any_failed() const {
    return std::any_of(cells.begin(), cells.end(),
                       [](const CellRecord& c) { return c.failed; });
}

std::string prior_kind_name(PriorKind kind) {
    return kind == PriorKind::cauchy_diff ? "cauchy" : "tv";
}

std::uint64_t cell_seed(std::uint64_t config_seed, int tau_index,
                        int noise_index) {
    return Rng::mix(config_seed, static_cast<std::uint64_t>(tau_index) * 4096u +
                                     static_cast<std::uint64_t>(noise_index));
}

double fit_sigma(const Dataset& ds) {
    const double scale = ds.g.size() > 0 ? ds.g.cwiseAbs().maxCoeff() : 1.0;
    const double floor = 1e-3 * std::max(scale, 1e-6);
    return std::max(ds.sigma, floor);
}

FitOutcome fit_dataset(const Dataset& ds, const PriorConfig& prior,
                       const OptConfig& opt, const MaternConfig& matern,
                       std::uint64_t seed) {
    const Grid& grid = ds.coarse_grid;
    const int n = grid.size();
    const double sigma = fit_sigma(ds);
    const Eigen::VectorXd g = ds.g;

    Eigen::VectorXd lo(n + 1), hi(n + 1);
    lo.head(n).setConstant(opt.box_log_ell.first);
    hi.head(n).setConstant(opt.box_log_ell.second);
    lo(n) = std::max(opt.box_log_tau.first, prior.log_tau_bounds.first);
    hi(n) = std::min(opt.box_log_tau.second, prior.log_tau_bounds.second);

    Eigen::VectorXd x0(n + 1);
    x0.head(n).setConstant(opt.init_log_ell);
    x0(n) = opt.init_log_tau;

    // Clip before evaluating so finite-difference probes at the box edge
    // never leave the prior support.
    const auto clamp = [lo, hi](const Eigen::VectorXd& theta) {
        return theta.cwiseMax(lo).cwiseMin(hi).eval();
    };
    const Objective objective = [&, clamp](const Eigen::VectorXd& theta) {
        return hyper_log_posterior(g, HyperParams::unpack(clamp(theta)), prior,
                                   grid, sigma, matern);
    };
    const Gradient gradient = [&, clamp](const Eigen::VectorXd& theta) {
        return hyper_log_posterior_grad(g, HyperParams::unpack(clamp(theta)),
                                        prior, grid, sigma, matern);
    };

    const OptResult res = maximize(objective, gradient, x0, lo, hi, opt, seed);

    FitOutcome out;
    out.hp_map = HyperParams::unpack(res.x);
    out.converged = res.converged;
    out.objective_trace = res.objective_trace;
    out.recon = conditional_posterior(g, out.hp_map, grid, sigma, matern);
    out.recon.alpha_used = prior.alpha;
    out.recon.iterations = res.iterations;
    if (prior.kind == PriorKind::tv_diff && prior.tv_smoothing_eps != 0.0) {
        // report the exact (unsmoothed) posterior value at the optimum
        PriorConfig exact = prior;
        exact.tv_smoothing_eps = 0.0;
        out.recon.final_objective =
            hyper_log_posterior(g, out.hp_map, exact, grid, sigma, matern);
    } else {
        out.recon.final_objective = res.final_objective;
    }
    return out;
}

std::pair<double, FitOutcome> grid_search_core(
    const std::vector<double>& alpha_grid,
    const std::function<std::pair<double, FitOutcome>(double)>& evaluate) {
    if (alpha_grid.empty()) throw Error("grid_search: empty alpha grid");
    std::vector<double> alphas = alpha_grid;
    std::sort(alphas.begin(), alphas.end());

    bool have_best = false;
    double best_alpha = 0.0, best_mse = 0.0;
    FitOutcome best_fit;
    std::string last_error = "no alpha evaluated";
    for (double alpha : alphas) {
        try {
            auto [mse, fit] = evaluate(alpha);
            if (!have_best || mse < best_mse) {  // ties keep the smaller alpha
                have_best = true;
                best_alpha = alpha;
                best_mse = mse;
                best_fit = std::move(fit);
            }
        } catch (const std::exception& e) {
            last_error = e.what();
            std::fprintf(stderr, "grid_search: alpha=%g failed: %s\n", alpha,
                         e.what());
        }
    }
    if (!have_best)
        throw Error("grid_search: every alpha failed: " + last_error);
    return {best_alpha, std::move(best_fit)};
}

std::pair<double, FitOutcome> grid_search_alpha(
    const Dataset& ds, PriorKind kind, const std::vector<double>& alpha_grid,
    const OptConfig& opt, const MaternConfig& matern, std::uint64_t seed) {
    if (ds.coarse_truth.size() != ds.coarse_grid.size())
        throw Error("grid_search_alpha: dataset carries no coarse truth");
    return grid_search_core(alpha_grid, [&](double alpha) {
        PriorConfig prior;
        prior.kind = kind;
        prior.alpha = alpha;
        FitOutcome fit = fit_dataset(ds, prior, opt, matern, seed);
        const double mse =
            relative_mse(fit.recon.posterior_mean, ds.coarse_truth);
        return std::make_pair(mse, std::move(fit));
    });
}

FitOutcome run_baseline_stationary(const Dataset& ds, const OptConfig& opt,
                                   const MaternConfig& matern,
                                   std::uint64_t seed) {
    const Grid& grid = ds.coarse_grid;
    const double sigma = fit_sigma(ds);
    const Eigen::VectorXd g = ds.g;
    const std::pair<double, double> tau_bounds = opt.box_log_tau;

    Eigen::VectorXd lo(2), hi(2), x0(2);
    lo << opt.box_log_ell.first, tau_bounds.first;
    hi << opt.box_log_ell.second, tau_bounds.second;
    x0 << opt.init_log_ell, opt.init_log_tau;

    const auto clamp = [lo, hi](const Eigen::VectorXd& theta) {
        return theta.cwiseMax(lo).cwiseMin(hi).eval();
    };
    const Objective objective = [&, clamp](const Eigen::VectorXd& theta) {
        const Eigen::VectorXd t = clamp(theta);
        return stationary_log_posterior(g, t(0), t(1), tau_bounds, grid, sigma,
                                        matern);
    };

    // Two parameters: central differences are cheap enough everywhere.
    OptConfig fd_opt = opt;
    fd_opt.gradient_mode = GradientMode::finite_difference;
    const OptResult res =
        maximize(objective, std::nullopt, x0, lo, hi, fd_opt, seed);

    FitOutcome out;
    out.hp_map.log_ell =
        Eigen::VectorXd::Constant(grid.size(), res.x(0));
    out.hp_map.log_tau = res.x(1);
    out.converged = res.converged;
    out.objective_trace = res.objective_trace;

    const Eigen::MatrixXd C = build_stationary(grid, res.x(0), matern);
    const Eigen::MatrixXd A =
        build_operator(grid, std::exp(res.x(1)), true).matrix;
    out.recon = conditional_posterior(g, A, C, sigma);
    out.recon.tau_hat = std::exp(res.x(1));
    out.recon.final_objective = res.final_objective;
    out.recon.iterations = res.iterations;
    return out;
}

namespace {

std::string cell_tag(double tau, double noise) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "tau%g_noise%g", tau, noise);
    return buf;
}

void write_fit_artifacts(const RunConfig& config, const fs::path& dir,
                         const Dataset& ds, const FitOutcome& fit,
                         const CellRecord& rec) {
    fs::create_directories(dir);
    save_cell_record(rec, dir / "cell.json");
    if (config.emit_json) {
        save_reconstruction(fit.recon, dir / "recon.json");
        save_hyperparams(fit.hp_map, dir / "hyperparams.json");
    }
    write_reconstruction_csv(ds.coarse_grid, fit.recon, ds.coarse_truth,
                             dir / "recon.csv");
    write_trace_csv(fit.objective_trace, dir / "trace.csv");
    if (config.emit_svg) {
        svg::LinePlot plot("reconstruction");
        const Eigen::VectorXd sd =
            fit.recon.posterior_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
        plot.add_band(ds.coarse_grid.points,
                      fit.recon.posterior_mean - 2.0 * sd,
                      fit.recon.posterior_mean + 2.0 * sd);
        plot.add_series(ds.coarse_grid.points, ds.coarse_truth, "#999999");
        plot.add_series(ds.coarse_grid.points, fit.recon.posterior_mean,
                        "#d62728");
        plot.write(dir / "recon.svg");

        svg::LinePlot field("log length-scale field");
        field.add_series(ds.coarse_grid.points, fit.hp_map.log_ell, "#1f77b4");
        field.write(dir / "length_scale.svg");
    }
}

} // namespace

ExperimentReport run_experiment(const RunConfig& config) {
    config.validate();
    const fs::path out_dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir / "cells", ec);
    if (ec)
        throw IoError("run_experiment: cannot create output directory " +
                      out_dir.string() + ": " + ec.message());

    ExperimentReport report;
    for (size_t ti = 0; ti < config.tau_list.size(); ++ti) {
        for (size_t ni = 0; ni < config.noise_list.size(); ++ni) {
            const double tau = config.tau_list[ti];
            const double noise = config.noise_list[ni];
            const std::uint64_t seed =
                cell_seed(config.seed, static_cast<int>(ti),
                          static_cast<int>(ni));
            const Dataset ds =
                simulate(config.signal, config.fine_n, config.coarse_n, tau,
                         noise, seed);

            const fs::path cell_dir = out_dir / "cells" / cell_tag(tau, noise);
            fs::create_directories(cell_dir);
            if (config.emit_json) save_dataset(ds, cell_dir / "dataset.json");
            write_dataset_csv(ds, cell_dir / "data.csv");
            if (config.emit_svg) {
                svg::LinePlot plot("measurement");
                plot.add_series(ds.coarse_grid.points, ds.coarse_truth,
                                "#999999");
                plot.add_series(ds.coarse_grid.points, ds.g, "#1f77b4");
                plot.write(cell_dir / "measurement.svg");
            }

            // grid-searched fit with the configured prior
            CellRecord rec;
            rec.tau_true = tau;
            rec.noise_percent = noise;
            rec.prior_kind = prior_kind_name(config.prior.kind);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                auto [alpha, fit] = grid_search_alpha(
                    ds, config.prior.kind, config.alpha_grid, config.opt,
                    config.matern, seed);
                rec.alpha_best = alpha;
                rec.tau_hat = fit.recon.tau_hat;
                rec.rel_mse_percent =
                    relative_mse(fit.recon.posterior_mean, ds.coarse_truth);
                rec.iterations = fit.recon.iterations;
                rec.wall_time_seconds =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
                write_fit_artifacts(config, cell_dir / rec.prior_kind, ds, fit,
                                    rec);
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
                rec.wall_time_seconds =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
            }
            report.cells.push_back(rec);

            if (!config.run_baseline) continue;
            CellRecord base;
            base.tau_true = tau;
            base.noise_percent = noise;
            base.prior_kind = "stationary";
            const auto t1 = std::chrono::steady_clock::now();
            try {
                FitOutcome fit =
                    run_baseline_stationary(ds, config.opt, config.matern, seed);
                base.tau_hat = fit.recon.tau_hat;
                base.rel_mse_percent =
                    relative_mse(fit.recon.posterior_mean, ds.coarse_truth);
                base.iterations = fit.recon.iterations;
                base.wall_time_seconds =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t1)
                        .count();
                write_fit_artifacts(config, cell_dir / "stationary", ds, fit,
                                    base);
            } catch (const std::exception& e) {
                base.failed = true;
                base.error = e.what();
                base.wall_time_seconds =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t1)
                        .count();
            }
            report.cells.push_back(base);
        }
    }

    write_report_csv(report, out_dir / "report.csv", config.timing_in_report);
    write_timings_csv(report, out_dir / "timings.csv");
    return report;
}

} // namespace blindhd
