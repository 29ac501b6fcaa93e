#pragma once

#include <filesystem>

#include "blindhd/experiments.hpp"

namespace blindhd {

// Dataset file: {grid: {start, end, n}, g, sigma, true_tau, noise_percent,
// seed, coarse_truth}. The fine-grid truth is not serialised.
void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// Columns x, g, truth.
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

// Reconstruction file: {mean, var_diag, tau_hat, alpha, objective,
// iterations}; the full posterior covariance only on request.
void save_reconstruction(const Reconstruction& r,
                         const std::filesystem::path& path,
                         bool include_cov = false);

// Columns x, mean, sd, truth.
void write_reconstruction_csv(const Grid& grid, const Reconstruction& r,
                              const Eigen::VectorXd& truth,
                              const std::filesystem::path& path);

// Hyperparameter estimate: {log_ell, log_tau}.
void save_hyperparams(const HyperParams& hp, const std::filesystem::path& path);
HyperParams load_hyperparams(const std::filesystem::path& path);

// Run configuration, unknown keys rejected at every level. Missing keys
// fall back to the defaults.
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

// Deterministic per-cell summary (wall time excluded).
void save_cell_record(const CellRecord& rec, const std::filesystem::path& path);
CellRecord load_cell_record(const std::filesystem::path& path);

// Header: tau_true,noise_percent,prior,alpha,tau_hat,rel_mse_percent,seconds,iterations
void write_report_csv(const ExperimentReport& report,
                      const std::filesystem::path& path, bool include_timing);

// Measured wall times per cell, kept out of report.csv by default.
void write_timings_csv(const ExperimentReport& report,
                       const std::filesystem::path& path);

// Optimiser convergence trace, columns iteration,objective.
void write_trace_csv(const std::vector<double>& trace,
                     const std::filesystem::path& path);

std::string format_double(double v);  // shared CSV number formatting

} // namespace blindhd
