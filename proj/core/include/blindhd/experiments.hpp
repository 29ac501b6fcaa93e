#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "blindhd/forward.hpp"
#include "blindhd/inference.hpp"
#include "blindhd/optimizer.hpp"

namespace blindhd {

struct RunConfig {
    SignalSpec signal = SignalSpec::default_spec();
    int fine_n = 300;
    int coarse_n = 100;
    std::vector<double> tau_list{0.25, 0.5};
    std::vector<double> noise_list{0.01, 0.05};
    PriorConfig prior;
    std::vector<double> alpha_grid;  // strictly increasing
    OptConfig opt;
    MaternConfig matern;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    bool run_baseline = true;
    bool timing_in_report = false;  // measured seconds go to report.csv; off
                                    // keeps reruns byte-identical
    bool emit_json = true;
    bool emit_svg = false;

    static RunConfig defaults();
    void validate() const;
};

struct CellRecord {
    double tau_true = 0.0;
    double noise_percent = 0.0;
    std::string prior_kind;  // "cauchy", "tv" or "stationary"
    double alpha_best = std::numeric_limits<double>::quiet_NaN();
    double tau_hat = std::numeric_limits<double>::quiet_NaN();
    double rel_mse_percent = std::numeric_limits<double>::quiet_NaN();
    double wall_time_seconds = 0.0;
    int iterations = 0;
    bool failed = false;
    std::string error;
};

struct ExperimentReport {
    std::vector<CellRecord> cells;
    bool any_failed() const;
};

// MAP fit (step one) followed by the closed-form reconstruction (step two).
struct FitOutcome {
    HyperParams hp_map;
    Reconstruction recon;
    bool converged = false;
    std::vector<double> objective_trace;
};

// Effective noise level used for inversion: the dataset sigma, floored away
// from zero so that noiseless datasets stay well-posed.
double fit_sigma(const Dataset& ds);

FitOutcome fit_dataset(const Dataset& ds, const PriorConfig& prior,
                       const OptConfig& opt, const MaternConfig& matern,
                       std::uint64_t seed);

// Argmin over a set of alphas; evaluate(alpha) returns the fit and its
// relative MSE. Ties break toward the smaller alpha; failed evaluations are
// skipped. Factored out so the selection logic is testable in isolation.
std::pair<double, FitOutcome> grid_search_core(
    const std::vector<double>& alpha_grid,
    const std::function<std::pair<double, FitOutcome>(double)>& evaluate);

// For each alpha: MAP fit, reconstruction, relative MSE against the stored
// coarse truth. Returns the best alpha and its fit.
std::pair<double, FitOutcome> grid_search_alpha(
    const Dataset& ds, PriorKind kind, const std::vector<double>& alpha_grid,
    const OptConfig& opt, const MaternConfig& matern, std::uint64_t seed);

// Two-parameter fit (scalar log length-scale, log tau) against the marginal
// likelihood with the uniform log tau prior; no difference prior applies.
FitOutcome run_baseline_stationary(const Dataset& ds, const OptConfig& opt,
                                   const MaternConfig& matern,
                                   std::uint64_t seed);

// Full harness: simulate every (tau, noise) cell with a per-cell seed,
// grid-search the configured prior, run the stationary baseline, and write
// per-cell artifacts plus report.csv under config.output_dir.
ExperimentReport run_experiment(const RunConfig& config);

// Pure function of the run seed and the cell indices.
std::uint64_t cell_seed(std::uint64_t config_seed, int tau_index,
                        int noise_index);

std::string prior_kind_name(PriorKind kind);

} // namespace blindhd
