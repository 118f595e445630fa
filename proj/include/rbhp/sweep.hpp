#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbhp/library_io.hpp"

namespace rbhp {

struct SweepRecord {
    std::string algorithm;  // "tree" or "proximity"
    int n_basis = 0;
    double eps = 0.0;
    int num_subdomains = 0;  // K
    int depth = 0;           // L
    double quasi_uniformity = 0.0;
    long truth_solves = 0;
    double wall_seconds = 0.0;
    bool depth_exceeded = false;
};

struct SweepConfig {
    std::string algorithm = "tree";
    std::vector<int> n_values;
    std::vector<double> eps_values;  // strictly decreasing
    std::size_t train_size = 1000;
    std::uint64_t seed = 0;
    std::optional<Param> init;
    int l_max = 40;
    std::string persist_prefix;  // when set, libraries for the smallest eps are saved here
};

/// One library build per (N, eps) cell, in deterministic (N, eps) order.
std::vector<SweepRecord> run_epsilon_sweep(const AffineProblem& problem, const SweepConfig& config);

/// CSV for sweep records. Timings are opt-in so that default output is
/// byte-identical across repeated runs.
std::string sweep_csv(const std::vector<SweepRecord>& records, bool include_timings = false);
std::vector<SweepRecord> parse_sweep_csv(const std::string& text);

struct LinearConvergenceResult {
    GreedyResult greedy;
    std::string csv;  // n, mu_1..mu_d, eta_max (doubles as the greedy scatter)
};

/// Full-domain greedy study: eta_max as a function of N plus the selected
/// parameters.
LinearConvergenceResult run_linear_convergence(const AffineProblem& problem, int n_max, std::size_t train_size,
                                               std::uint64_t seed, const std::optional<Param>& init);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of log K against log(1/eps) over rows with K > 1, for
/// one (algorithm, N) series. Needs at least 3 such rows.
SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, int n_basis, const std::string& algorithm);
SlopeFit fit_loglog_slope_csv(const std::string& csv_text, int n_basis, const std::string& algorithm);

/// Expected partition-growth rate d / N^(1/d) for effective dimension d.
double theoretical_slope(int dim, int n_basis);

}  // namespace rbhp
