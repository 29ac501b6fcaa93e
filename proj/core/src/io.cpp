#include "blindhd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <vector>

#include <json.hpp>

namespace blindhd {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

json vec_to_json(const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<long>(values.size()));
}

// nlohmann serialises NaN as null; map it back on load.
json maybe_nan(double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
}

double nan_or(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                       : j.get<double>();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.contains(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    json j;
    j["grid"] = {{"start", ds.coarse_grid.start()},
                 {"end", ds.coarse_grid.end()},
                 {"n", ds.coarse_grid.size()}};
    j["g"] = vec_to_json(ds.g);
    j["sigma"] = ds.sigma;
    j["true_tau"] = ds.true_tau;
    j["noise_percent"] = ds.noise_percent;
    j["seed"] = ds.seed;
    j["coarse_truth"] = vec_to_json(ds.coarse_truth);
    write_json(path, j);
}

Dataset load_dataset(const std::filesystem::path& path) {
    const json j = read_json(path);
    reject_unknown_keys(
        j, {"grid", "g", "sigma", "true_tau", "noise_percent", "seed",
            "coarse_truth"},
        "dataset file");
    Dataset ds;
    const json& grid = j.at("grid");
    reject_unknown_keys(grid, {"start", "end", "n"}, "dataset grid");
    ds.coarse_grid = Grid::uniform(grid.at("start").get<double>(),
                                   grid.at("end").get<double>(),
                                   grid.at("n").get<int>());
    ds.g = vec_from_json(j.at("g"));
    ds.sigma = j.at("sigma").get<double>();
    ds.true_tau = j.at("true_tau").get<double>();
    ds.noise_percent = j.at("noise_percent").get<double>();
    ds.seed = j.at("seed").get<std::uint64_t>();
    ds.coarse_truth = vec_from_json(j.at("coarse_truth"));
    if (ds.g.size() != ds.coarse_grid.size())
        throw IoError("dataset file: measurement length does not match grid");
    return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::string text = "x,g,truth\n";
    for (int i = 0; i < ds.coarse_grid.size(); ++i) {
        text += format_double(ds.coarse_grid.points(i)) + "," +
                format_double(ds.g(i)) + "," +
                format_double(ds.coarse_truth(i)) + "\n";
    }
    write_file(path, text);
}

void save_reconstruction(const Reconstruction& r,
                         const std::filesystem::path& path, bool include_cov) {
    json j;
    j["mean"] = vec_to_json(r.posterior_mean);
    j["var_diag"] = vec_to_json(r.posterior_cov.diagonal());
    j["tau_hat"] = r.tau_hat;
    j["alpha"] = maybe_nan(r.alpha_used);
    j["objective"] = r.final_objective;
    j["iterations"] = r.iterations;
    if (include_cov) {
        json rows = json::array();
        for (int i = 0; i < r.posterior_cov.rows(); ++i)
            rows.push_back(vec_to_json(r.posterior_cov.row(i)));
        j["cov"] = rows;
    }
    write_json(path, j);
}

void write_reconstruction_csv(const Grid& grid, const Reconstruction& r,
                              const Eigen::VectorXd& truth,
                              const std::filesystem::path& path) {
    std::string text = "x,mean,sd,truth\n";
    for (int i = 0; i < grid.size(); ++i) {
        const double var = std::max(0.0, r.posterior_cov(i, i));
        text += format_double(grid.points(i)) + "," +
                format_double(r.posterior_mean(i)) + "," +
                format_double(std::sqrt(var)) + "," +
                format_double(truth(i)) + "\n";
    }
    write_file(path, text);
}

void save_hyperparams(const HyperParams& hp,
                      const std::filesystem::path& path) {
    json j;
    j["log_ell"] = vec_to_json(hp.log_ell);
    j["log_tau"] = hp.log_tau;
    write_json(path, j);
}

HyperParams load_hyperparams(const std::filesystem::path& path) {
    const json j = read_json(path);
    reject_unknown_keys(j, {"log_ell", "log_tau"}, "hyperparams file");
    HyperParams hp;
    hp.log_ell = vec_from_json(j.at("log_ell"));
    hp.log_tau = j.at("log_tau").get<double>();
    return hp;
}

namespace {

Segment segment_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double from = j.at("from").get<double>();
    const double to = j.at("to").get<double>();
    if (kind == "gaussian_bump") {
        reject_unknown_keys(j, {"kind", "from", "to", "center", "width",
                                "height"},
                            "gaussian_bump segment");
        return Segment::bump(from, to, j.at("center").get<double>(),
                             j.at("width").get<double>(),
                             j.at("height").get<double>());
    }
    if (kind == "linear_ramp") {
        reject_unknown_keys(j, {"kind", "from", "to", "start_value",
                                "end_value"},
                            "linear_ramp segment");
        return Segment::ramp(from, to, j.at("start_value").get<double>(),
                             j.at("end_value").get<double>());
    }
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "from", "to", "value"},
                            "constant segment");
        return Segment::flat(from, to, j.at("value").get<double>());
    }
    throw ConfigError("unknown segment kind '" + kind + "'");
}

json segment_to_json(const Segment& s) {
    json j;
    j["from"] = s.from;
    j["to"] = s.to;
    switch (s.kind) {
        case Segment::Kind::gaussian_bump:
            j["kind"] = "gaussian_bump";
            j["center"] = s.center;
            j["width"] = s.width;
            j["height"] = s.height;
            break;
        case Segment::Kind::linear_ramp:
            j["kind"] = "linear_ramp";
            j["start_value"] = s.start_value;
            j["end_value"] = s.end_value;
            break;
        case Segment::Kind::constant:
            j["kind"] = "constant";
            j["value"] = s.value;
            break;
    }
    return j;
}

std::pair<double, double> pair_from_json(const json& j,
                                         const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(where + " must be a [lo, hi] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    const json j = read_json(path);
    reject_unknown_keys(
        j,
        {"signal", "fine_n", "coarse_n", "tau_list", "noise_list", "prior",
         "alpha_grid", "opt", "matern", "seed", "output_dir", "run_baseline",
         "timing_in_report", "emit_json", "emit_svg"},
        "config");
    RunConfig cfg = RunConfig::defaults();

    if (j.contains("signal")) {
        const json& sig = j["signal"];
        reject_unknown_keys(sig, {"domain_start", "domain_end", "pieces"},
                            "config.signal");
        SignalSpec spec;
        spec.domain_start = sig.at("domain_start").get<double>();
        spec.domain_end = sig.at("domain_end").get<double>();
        for (const json& piece : sig.at("pieces"))
            spec.pieces.push_back(segment_from_json(piece));
        cfg.signal = spec;
    }
    if (j.contains("fine_n")) cfg.fine_n = j["fine_n"].get<int>();
    if (j.contains("coarse_n")) cfg.coarse_n = j["coarse_n"].get<int>();
    if (j.contains("tau_list"))
        cfg.tau_list = j["tau_list"].get<std::vector<double>>();
    if (j.contains("noise_list"))
        cfg.noise_list = j["noise_list"].get<std::vector<double>>();
    if (j.contains("prior")) {
        const json& p = j["prior"];
        reject_unknown_keys(
            p, {"kind", "alpha", "tv_smoothing_eps", "log_tau_bounds"},
            "config.prior");
        if (p.contains("kind")) {
            const std::string kind = p["kind"].get<std::string>();
            if (kind == "cauchy_diff")
                cfg.prior.kind = PriorKind::cauchy_diff;
            else if (kind == "tv_diff")
                cfg.prior.kind = PriorKind::tv_diff;
            else
                throw ConfigError("unknown prior kind '" + kind + "'");
        }
        if (p.contains("alpha")) cfg.prior.alpha = p["alpha"].get<double>();
        if (p.contains("tv_smoothing_eps"))
            cfg.prior.tv_smoothing_eps = p["tv_smoothing_eps"].get<double>();
        if (p.contains("log_tau_bounds"))
            cfg.prior.log_tau_bounds =
                pair_from_json(p["log_tau_bounds"], "prior.log_tau_bounds");
    }
    if (j.contains("alpha_grid"))
        cfg.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
    if (j.contains("opt")) {
        const json& o = j["opt"];
        reject_unknown_keys(o,
                            {"max_iterations", "gradient_mode", "fd_step",
                             "convergence_tol", "memory", "box_log_ell",
                             "box_log_tau", "init_log_ell", "init_log_tau",
                             "restarts"},
                            "config.opt");
        if (o.contains("max_iterations"))
            cfg.opt.max_iterations = o["max_iterations"].get<int>();
        if (o.contains("gradient_mode")) {
            const std::string mode = o["gradient_mode"].get<std::string>();
            if (mode == "finite_difference")
                cfg.opt.gradient_mode = GradientMode::finite_difference;
            else if (mode == "analytic")
                cfg.opt.gradient_mode = GradientMode::analytic;
            else
                throw ConfigError("unknown gradient_mode '" + mode + "'");
        }
        if (o.contains("fd_step")) cfg.opt.fd_step = o["fd_step"].get<double>();
        if (o.contains("convergence_tol"))
            cfg.opt.convergence_tol = o["convergence_tol"].get<double>();
        if (o.contains("memory")) cfg.opt.memory = o["memory"].get<int>();
        if (o.contains("box_log_ell"))
            cfg.opt.box_log_ell =
                pair_from_json(o["box_log_ell"], "opt.box_log_ell");
        if (o.contains("box_log_tau"))
            cfg.opt.box_log_tau =
                pair_from_json(o["box_log_tau"], "opt.box_log_tau");
        if (o.contains("init_log_ell"))
            cfg.opt.init_log_ell = o["init_log_ell"].get<double>();
        if (o.contains("init_log_tau"))
            cfg.opt.init_log_tau = o["init_log_tau"].get<double>();
        if (o.contains("restarts")) cfg.opt.restarts = o["restarts"].get<int>();
    }
    if (j.contains("matern")) {
        const json& m = j["matern"];
        reject_unknown_keys(m, {"magnitude", "smoothness"}, "config.matern");
        if (m.contains("magnitude"))
            cfg.matern.magnitude = m["magnitude"].get<double>();
        if (m.contains("smoothness"))
            cfg.matern.smoothness = m["smoothness"].get<double>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir"))
        cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("run_baseline"))
        cfg.run_baseline = j["run_baseline"].get<bool>();
    if (j.contains("timing_in_report"))
        cfg.timing_in_report = j["timing_in_report"].get<bool>();
    if (j.contains("emit_json")) cfg.emit_json = j["emit_json"].get<bool>();
    if (j.contains("emit_svg")) cfg.emit_svg = j["emit_svg"].get<bool>();

    cfg.validate();
    return cfg;
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
    json j;
    json sig;
    sig["domain_start"] = cfg.signal.domain_start;
    sig["domain_end"] = cfg.signal.domain_end;
    sig["pieces"] = json::array();
    for (const Segment& s : cfg.signal.pieces)
        sig["pieces"].push_back(segment_to_json(s));
    j["signal"] = sig;
    j["fine_n"] = cfg.fine_n;
    j["coarse_n"] = cfg.coarse_n;
    j["tau_list"] = cfg.tau_list;
    j["noise_list"] = cfg.noise_list;
    j["prior"] = {{"kind", cfg.prior.kind == PriorKind::cauchy_diff
                               ? "cauchy_diff"
                               : "tv_diff"},
                  {"alpha", cfg.prior.alpha},
                  {"tv_smoothing_eps", cfg.prior.tv_smoothing_eps},
                  {"log_tau_bounds",
                   {cfg.prior.log_tau_bounds.first,
                    cfg.prior.log_tau_bounds.second}}};
    j["alpha_grid"] = cfg.alpha_grid;
    j["opt"] = {{"max_iterations", cfg.opt.max_iterations},
                {"gradient_mode",
                 cfg.opt.gradient_mode == GradientMode::analytic
                     ? "analytic"
                     : "finite_difference"},
                {"fd_step", cfg.opt.fd_step},
                {"convergence_tol", cfg.opt.convergence_tol},
                {"memory", cfg.opt.memory},
                {"box_log_ell",
                 {cfg.opt.box_log_ell.first, cfg.opt.box_log_ell.second}},
                {"box_log_tau",
                 {cfg.opt.box_log_tau.first, cfg.opt.box_log_tau.second}},
                {"init_log_ell", cfg.opt.init_log_ell},
                {"init_log_tau", cfg.opt.init_log_tau},
                {"restarts", cfg.opt.restarts}};
    j["matern"] = {{"magnitude", cfg.matern.magnitude},
                   {"smoothness", cfg.matern.smoothness}};
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["run_baseline"] = cfg.run_baseline;
    j["timing_in_report"] = cfg.timing_in_report;
    j["emit_json"] = cfg.emit_json;
    j["emit_svg"] = cfg.emit_svg;
    write_json(path, j);
}

void save_cell_record(const CellRecord& rec,
                      const std::filesystem::path& path) {
    json j;
    j["tau_true"] = rec.tau_true;
    j["noise_percent"] = rec.noise_percent;
    j["prior"] = rec.prior_kind;
    j["alpha"] = maybe_nan(rec.alpha_best);
    j["tau_hat"] = maybe_nan(rec.tau_hat);
    j["rel_mse_percent"] = maybe_nan(rec.rel_mse_percent);
    j["iterations"] = rec.iterations;
    j["failed"] = rec.failed;
    j["error"] = rec.error;
    write_json(path, j);
}

CellRecord load_cell_record(const std::filesystem::path& path) {
    const json j = read_json(path);
    reject_unknown_keys(j,
                        {"tau_true", "noise_percent", "prior", "alpha",
                         "tau_hat", "rel_mse_percent", "iterations", "failed",
                         "error"},
                        "cell record");
    CellRecord rec;
    rec.tau_true = j.at("tau_true").get<double>();
    rec.noise_percent = j.at("noise_percent").get<double>();
    rec.prior_kind = j.at("prior").get<std::string>();
    rec.alpha_best = nan_or(j.at("alpha"));
    rec.tau_hat = nan_or(j.at("tau_hat"));
    rec.rel_mse_percent = nan_or(j.at("rel_mse_percent"));
    rec.iterations = j.at("iterations").get<int>();
    rec.failed = j.at("failed").get<bool>();
    rec.error = j.at("error").get<std::string>();
    return rec;
}

void write_report_csv(const ExperimentReport& report,
                      const std::filesystem::path& path, bool include_timing) {
    std::string text =
        "tau_true,noise_percent,prior,alpha,tau_hat,rel_mse_percent,seconds,"
        "iterations\n";
    for (const CellRecord& c : report.cells) {
        char seconds[32];
        std::snprintf(seconds, sizeof(seconds), "%.3f",
                      include_timing ? c.wall_time_seconds : 0.0);
        text += format_double(c.tau_true) + "," +
                format_double(c.noise_percent) + "," + c.prior_kind + "," +
                (std::isnan(c.alpha_best) ? std::string()
                                          : format_double(c.alpha_best)) +
                "," + format_double(c.tau_hat) + "," +
                format_double(c.rel_mse_percent) + "," + seconds + "," +
                std::to_string(c.iterations) + "\n";
    }
    write_file(path, text);
}

void write_trace_csv(const std::vector<double>& trace,
                     const std::filesystem::path& path) {
    std::string text = "iteration,objective\n";
    for (size_t i = 0; i < trace.size(); ++i)
        text += std::to_string(i) + "," + format_double(trace[i]) + "\n";
    write_file(path, text);
}

void write_timings_csv(const ExperimentReport& report,
                       const std::filesystem::path& path) {
    std::string text = "tau_true,noise_percent,prior,seconds\n";
    for (const CellRecord& c : report.cells) {
        char seconds[32];
        std::snprintf(seconds, sizeof(seconds), "%.3f", c.wall_time_seconds);
        text += format_double(c.tau_true) + "," +
                format_double(c.noise_percent) + "," + c.prior_kind + "," +
                seconds + "\n";
    }
    write_file(path, text);
}

} // namespace blindhd
