#pragma once

// Monte Carlo strong and weak error estimation for the IGBM schemes against
// a fine log-ODE reference driven by the same Brownian paths, plus
// log-log convergence-rate fitting.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polybm/igbm.hpp"

namespace polybm {

struct ExperimentConfig {
    IgbmParams params;
    std::vector<SchemeKind> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    std::vector<int> step_counts{25, 50, 100, 200, 400};
    std::size_t num_paths = 10000;
    std::uint64_t seed = 20190416;
    /// Fine substeps per coarse step. 0 selects the standard rule: fine step
    /// min(h/10, T/1000), i.e. max(10, ceil(1000/N)) substeps.
    int fine_substeps = 0;
    /// Worker threads. Results do not depend on this value.
    unsigned workers = 1;

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

/// Fine substeps per coarse step for N coarse steps.
int fine_substeps_for(const ExperimentConfig& config, int steps);

struct ErrorEstimate {
    double error = 0.0;
    double std_err = 0.0;
};

/// S_N = sqrt(E[(Y_N - Y_fine)^2]) with a delta-method standard error.
/// N must be one of config.step_counts (the coupling depends on the whole list).
ErrorEstimate strong_error(const ExperimentConfig& config, SchemeKind scheme, int steps);

/// E_N = |E[(Y_N - b)^+ - (Y_fine - b)^+]| from per-path payoff differences.
ErrorEstimate weak_error(const ExperimentConfig& config, SchemeKind scheme, int steps);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// OLS standard error of the slope; 0 for an exact fit.
    double slope_stderr = 0.0;
};

/// Least squares of log(error) on log(h). Needs >= 3 points, all positive.
SlopeFit fit_slope(std::span<const std::pair<double, double>> points);

enum class Metric { Strong, Weak };

struct ErrorRow {
    SchemeKind scheme;
    int steps;
    double h;
    double error;
    double std_err;
};

struct SlopeRow {
    SchemeKind scheme;
    Metric metric;
    SlopeFit fit;
};

struct ConvergenceReport {
    std::vector<ErrorRow> strong;
    std::vector<ErrorRow> weak;
    /// One row per (scheme, metric) with at least three positive errors.
    std::vector<SlopeRow> slopes;
};

/// Every (scheme, N) of the configuration in a single pass over the paths.
/// Deterministic given the seed, independent of the worker count.
ConvergenceReport run_experiment(const ExperimentConfig& config);

}  // namespace polybm
