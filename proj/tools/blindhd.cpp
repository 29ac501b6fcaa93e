// blindhd: blind hierarchical deconvolution of 1-D signals.
//
// Subcommands: simulate (emit a dataset), fit (one dataset, one prior,
// fixed alpha or grid search), baseline (stationary fit), experiment
// (full tau x noise grid), report (re-render tables and plots from
// stored results).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blindhd/blindhd.hpp"

namespace fs = std::filesystem;
using namespace blindhd;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> formats;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

RunConfig effective_config(const GlobalOpts& g) {
    RunConfig cfg = g.config_path.empty() ? RunConfig::defaults()
                                          : load_run_config(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    if (!g.formats.empty()) {
        cfg.emit_json = false;
        cfg.emit_svg = false;
        for (const std::string& f : g.formats) {
            if (f == "json") cfg.emit_json = true;
            else if (f == "svg") cfg.emit_svg = true;
            else if (f == "csv") continue;  // always written
            else throw ConfigError("unknown format '" + f + "'");
        }
    }
    return cfg;
}

PriorKind parse_prior(const std::string& name) {
    if (name == "cauchy" || name == "cauchy_diff") return PriorKind::cauchy_diff;
    if (name == "tv" || name == "tv_diff") return PriorKind::tv_diff;
    throw ConfigError("unknown prior '" + name + "' (expected cauchy or tv)");
}

void write_measurement_svg(const Dataset& ds, const fs::path& path) {
    svg::LinePlot plot("measurement");
    plot.add_series(ds.coarse_grid.points, ds.coarse_truth, "#999999");
    plot.add_series(ds.coarse_grid.points, ds.g, "#1f77b4");
    plot.write(path);
}

void write_fit_svg(const Dataset& ds, const Reconstruction& recon,
                   const HyperParams& hp, const fs::path& dir) {
    svg::LinePlot plot("reconstruction");
    const Eigen::VectorXd sd =
        recon.posterior_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    plot.add_band(ds.coarse_grid.points, recon.posterior_mean - 2.0 * sd,
                  recon.posterior_mean + 2.0 * sd);
    plot.add_series(ds.coarse_grid.points, ds.coarse_truth, "#999999");
    plot.add_series(ds.coarse_grid.points, recon.posterior_mean, "#d62728");
    plot.write(dir / "recon.svg");

    svg::LinePlot field("log length-scale field");
    field.add_series(ds.coarse_grid.points, hp.log_ell, "#1f77b4");
    field.write(dir / "length_scale.svg");
}

void emit_fit(const RunConfig& cfg, const Dataset& ds, const FitOutcome& fit,
              const std::string& prior_name, double alpha_best,
              const fs::path& dir) {
    fs::create_directories(dir);
    const double mse =
        ds.coarse_truth.size() == ds.coarse_grid.size()
            ? relative_mse(fit.recon.posterior_mean, ds.coarse_truth)
            : std::numeric_limits<double>::quiet_NaN();

    CellRecord rec;
    rec.tau_true = ds.true_tau;
    rec.noise_percent = ds.noise_percent;
    rec.prior_kind = prior_name;
    rec.alpha_best = alpha_best;
    rec.tau_hat = fit.recon.tau_hat;
    rec.rel_mse_percent = mse;
    rec.iterations = fit.recon.iterations;
    save_cell_record(rec, dir / "cell.json");

    if (cfg.emit_json) {
        save_reconstruction(fit.recon, dir / "recon.json");
        save_hyperparams(fit.hp_map, dir / "hyperparams.json");
    }
    write_reconstruction_csv(ds.coarse_grid, fit.recon, ds.coarse_truth,
                             dir / "recon.csv");
    write_trace_csv(fit.objective_trace, dir / "trace.csv");
    if (cfg.emit_svg) write_fit_svg(ds, fit.recon, fit.hp_map, dir);

    std::printf(
        "%s: tau_hat=%.4f rel_mse=%.4f%% alpha=%g objective=%.4f "
        "iterations=%d -> %s\n",
        prior_name.c_str(), fit.recon.tau_hat, mse, alpha_best,
        fit.recon.final_objective, fit.recon.iterations, dir.string().c_str());
}

int cmd_simulate(const GlobalOpts& g, double tau, double noise, int fine_n,
                 int coarse_n) {
    RunConfig cfg = effective_config(g);
    if (fine_n > 0) cfg.fine_n = fine_n;
    if (coarse_n > 0) cfg.coarse_n = coarse_n;
    const Dataset ds =
        simulate(cfg.signal, cfg.fine_n, cfg.coarse_n, tau, noise, cfg.seed);
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    save_dataset(ds, dir / "dataset.json");
    write_dataset_csv(ds, dir / "data.csv");
    if (cfg.emit_svg) write_measurement_svg(ds, dir / "measurement.svg");
    std::printf("dataset: n=%d tau=%g noise=%g sigma=%.6g seed=%llu -> %s\n",
                ds.coarse_grid.size(), ds.true_tau, ds.noise_percent, ds.sigma,
                static_cast<unsigned long long>(ds.seed),
                (dir / "dataset.json").string().c_str());
    return 0;
}

int cmd_fit(const GlobalOpts& g, const std::string& data_path,
            const std::string& prior_name, double alpha,
            const std::vector<double>& alpha_grid) {
    RunConfig cfg = effective_config(g);
    const Dataset ds = load_dataset(data_path);
    const PriorKind kind = parse_prior(prior_name);
    const std::uint64_t seed = g.seed_set ? g.seed : ds.seed;

    double alpha_best;
    FitOutcome fit;
    if (alpha > 0.0) {
        PriorConfig prior = cfg.prior;
        prior.kind = kind;
        prior.alpha = alpha;
        fit = fit_dataset(ds, prior, cfg.opt, cfg.matern, seed);
        alpha_best = alpha;
    } else {
        const std::vector<double>& grid =
            alpha_grid.empty() ? cfg.alpha_grid : alpha_grid;
        std::tie(alpha_best, fit) =
            grid_search_alpha(ds, kind, grid, cfg.opt, cfg.matern, seed);
    }
    emit_fit(cfg, ds, fit, prior_kind_name(kind), alpha_best,
             fs::path(cfg.output_dir));
    return 0;
}

int cmd_baseline(const GlobalOpts& g, const std::string& data_path) {
    RunConfig cfg = effective_config(g);
    const Dataset ds = load_dataset(data_path);
    const std::uint64_t seed = g.seed_set ? g.seed : ds.seed;
    const FitOutcome fit =
        run_baseline_stationary(ds, cfg.opt, cfg.matern, seed);
    emit_fit(cfg, ds, fit, "stationary",
             std::numeric_limits<double>::quiet_NaN(),
             fs::path(cfg.output_dir));
    return 0;
}

int cmd_experiment(const GlobalOpts& g, bool timing) {
    RunConfig cfg = effective_config(g);
    if (timing) cfg.timing_in_report = true;
    const ExperimentReport report = run_experiment(cfg);
    for (const CellRecord& c : report.cells) {
        if (c.failed) {
            std::printf("cell tau=%g noise=%g prior=%s FAILED: %s\n",
                        c.tau_true, c.noise_percent, c.prior_kind.c_str(),
                        c.error.c_str());
        } else {
            std::printf(
                "cell tau=%g noise=%g prior=%-10s alpha=%-8g tau_hat=%.4f "
                "rel_mse=%7.4f%% %.1fs\n",
                c.tau_true, c.noise_percent, c.prior_kind.c_str(),
                c.alpha_best, c.tau_hat, c.rel_mse_percent,
                c.wall_time_seconds);
        }
    }
    std::printf("report: %s\n",
                (fs::path(cfg.output_dir) / "report.csv").string().c_str());
    return report.any_failed() ? 3 : 0;
}

int cmd_report(const GlobalOpts& g, const std::string& in_dir) {
    RunConfig cfg = effective_config(g);
    const fs::path root = in_dir.empty() ? fs::path(cfg.output_dir)
                                         : fs::path(in_dir);
    const fs::path cells = root / "cells";
    if (!fs::exists(cells))
        throw IoError("report: no cells directory under " + root.string());

    std::vector<CellRecord> records;
    std::vector<fs::path> fit_dirs;
    for (const auto& cell : fs::directory_iterator(cells)) {
        if (!cell.is_directory()) continue;
        for (const auto& fit : fs::directory_iterator(cell.path())) {
            if (!fit.is_directory()) continue;
            const fs::path marker = fit.path() / "cell.json";
            if (fs::exists(marker)) {
                records.push_back(load_cell_record(marker));
                fit_dirs.push_back(fit.path());
            }
        }
    }
    std::vector<size_t> order(records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const CellRecord& ra = records[a];
        const CellRecord& rb = records[b];
        if (ra.tau_true != rb.tau_true) return ra.tau_true < rb.tau_true;
        if (ra.noise_percent != rb.noise_percent)
            return ra.noise_percent < rb.noise_percent;
        const bool sa = ra.prior_kind == "stationary";
        const bool sb = rb.prior_kind == "stationary";
        if (sa != sb) return sb;  // stationary rows last within a cell
        return ra.prior_kind < rb.prior_kind;
    });

    ExperimentReport report;
    for (size_t i : order) report.cells.push_back(records[i]);
    write_report_csv(report, root / "report.csv", false);
    std::printf("report: %zu rows -> %s\n", report.cells.size(),
                (root / "report.csv").string().c_str());

    if (cfg.emit_svg) {
        for (size_t i : order) {
            const fs::path dir = fit_dirs[i];
            const fs::path ds_file = dir.parent_path() / "dataset.json";
            if (!fs::exists(ds_file) || !fs::exists(dir / "recon.json") ||
                !fs::exists(dir / "hyperparams.json"))
                continue;
            const Dataset ds = load_dataset(ds_file);
            Reconstruction recon;
            const HyperParams hp = load_hyperparams(dir / "hyperparams.json");
            recon.posterior_mean = Eigen::VectorXd();
            // rebuild the posterior at the stored hyperparameters
            recon = conditional_posterior(ds.g, hp, ds.coarse_grid,
                                          fit_sigma(ds), cfg.matern);
            write_fit_svg(ds, recon, hp, dir);
            write_measurement_svg(ds, dir.parent_path() / "measurement.svg");
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind hierarchical deconvolution of 1-D signals"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration file (JSON)");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "random seed")
        ->each([&g](const std::string&) { g.seed_set = true; });
    app.add_option("--format", g.formats,
                   "artifact formats: csv, json, svg (csv always written)")
        ->delimiter(',');

    auto* sim = app.add_subcommand("simulate", "generate a noisy dataset");
    double tau = 0.25, noise = 0.01;
    int fine_n = 0, coarse_n = 0;
    sim->add_option("--tau", tau, "true kernel width")->required();
    sim->add_option("--noise", noise, "relative noise level, e.g. 0.01");
    sim->add_option("--fine-n", fine_n, "simulation grid size");
    sim->add_option("--coarse-n", coarse_n, "measurement grid size");

    auto* fit = app.add_subcommand("fit", "fit one dataset with one prior");
    std::string data_path, prior_name = "cauchy";
    double alpha = 0.0;
    std::vector<double> alpha_grid;
    fit->add_option("--data", data_path, "dataset file")->required();
    fit->add_option("--prior", prior_name, "cauchy or tv");
    fit->add_option("--alpha", alpha, "fixed regularisation scale");
    fit->add_option("--alpha-grid", alpha_grid,
                    "comma-separated alphas for the grid search")
        ->delimiter(',');

    auto* base = app.add_subcommand("baseline", "stationary two-parameter fit");
    std::string base_data;
    base->add_option("--data", base_data, "dataset file")->required();

    auto* exp = app.add_subcommand("experiment", "full tau x noise grid");
    bool timing = false;
    exp->add_flag("--timing", timing, "embed wall times in report.csv");

    auto* rep = app.add_subcommand("report",
                                   "re-render report.csv and plots from "
                                   "stored results");
    std::string in_dir;
    rep->add_option("--in", in_dir, "experiment output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(g, tau, noise, fine_n, coarse_n);
        if (fit->parsed())
            return cmd_fit(g, data_path, prior_name, alpha, alpha_grid);
        if (base->parsed()) return cmd_baseline(g, base_data);
        if (exp->parsed()) return cmd_experiment(g, timing);
        if (rep->parsed()) return cmd_report(g, in_dir);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
