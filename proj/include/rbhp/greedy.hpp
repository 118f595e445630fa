#pragma once

#include <optional>

#include "rbhp/rb_space.hpp"
#include "rbhp/training_set.hpp"

namespace rbhp {

struct GreedyTraceEntry {
    Param selected;
    double eta_max;  // max estimator over the training set after adding it
};

struct GreedyResult {
    RBSpace space;
    std::vector<GreedyTraceEntry> trace;
    double final_eta_max = 0.0;
    bool converged = false;  // final_eta_max <= tol
    int truth_solves = 0;
    // estimator argmax of the final sweep among unused points (the would-be
    // next selection); -1 when every point is used
    int next_index = -1;
    Param next_param;
    std::vector<std::size_t> selected_indices;
    std::vector<std::size_t> dropped_indices;   // dependent snapshots
    std::vector<std::size_t> visited_indices;   // chronological selection order
};

/// Greedy snapshot selection over a training set: one truth solve per
/// iteration, incremental X-orthonormalization and projection, estimator
/// sweep, argmax selection with ties broken by lowest training index.
/// Stops when eta_max <= tol or the basis reaches n_max. Dependent
/// snapshots are dropped and their parameters excluded from selection.
///
/// init: explicit initial parameter (must be a member of train) or, when
/// absent, an index drawn from the training-set seed.
GreedyResult greedy_build(const AffineProblem& problem, const ParamBox& box, const TrainingSet& train, int n_max,
                          double tol, const std::optional<Param>& init = std::nullopt);

/// Trace CSV: header n,mu_1..mu_d,eta_max; one row per kept snapshot.
std::string greedy_trace_csv(const GreedyResult& result, int dim);

}  // namespace rbhp
