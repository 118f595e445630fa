#include "rbhp/greedy.hpp"

#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace rbhp {

GreedyResult greedy_build(const AffineProblem& problem, const ParamBox& box, const TrainingSet& train, int n_max,
                          double tol, const std::optional<Param>& init) {
    if (train.size() == 0) throw std::invalid_argument("greedy_build: empty training set");
    if (n_max < 1) throw std::invalid_argument("greedy_build: n_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("greedy_build: tol must be positive");
    (void)box;  // the training set carries its box; kept in the signature for call-site clarity

    std::size_t current;
    if (init) {
        const auto idx = train.find(*init);
        if (!idx) throw std::invalid_argument("greedy_build: explicit init not in training set");
        current = *idx;
    } else {
        Rng rng(mix_seed(train.seed, 0x1717));
        current = rng.next_index(train.size());
    }

    GreedyResult result;
    result.space = RBSpace::create_empty(problem);
    std::unordered_set<std::size_t> used;

    while (true) {
        const Vector snapshot = truth_solve(problem, train[current]);
        ++result.truth_solves;
        result.visited_indices.push_back(current);
        if (result.space.extend(problem, snapshot, train[current])) {
            result.selected_indices.push_back(current);
        } else {
            result.dropped_indices.push_back(current);
        }
        used.insert(current);

        // estimator sweep: eta_max over the full set, argmax over unused points
        double eta_max = 0.0;
        double best_unused = -1.0;
        int best_index = -1;
        for (std::size_t i = 0; i < train.size(); ++i) {
            const double eta = result.space.estimate_error(problem, train[i]);
            if (eta > eta_max) eta_max = eta;
            if (!used.count(i) && eta > best_unused) {
                best_unused = eta;
                best_index = static_cast<int>(i);
            }
        }

        if (result.selected_indices.size() > result.trace.size()) {
            result.trace.push_back({train[current], eta_max});
        }
        result.final_eta_max = eta_max;
        result.next_index = best_index;
        if (best_index >= 0) result.next_param = train[static_cast<std::size_t>(best_index)];

        if (eta_max <= tol) {
            result.converged = true;
            break;
        }
        if (result.space.size() >= n_max) break;
        if (best_index < 0) break;  // training set exhausted
        current = static_cast<std::size_t>(best_index);
    }
    return result;
}

std::string greedy_trace_csv(const GreedyResult& result, int dim) {
    std::string csv = "n";
    for (int j = 1; j <= dim; ++j) {
        char col[16];
        std::snprintf(col, sizeof col, ",mu_%d", j);
        csv += col;
    }
    csv += ",eta_max\n";
    char buf[64];
    for (std::size_t n = 0; n < result.trace.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu", n + 1);
        csv += buf;
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", result.trace[n].selected[static_cast<std::size_t>(j)]);
            csv += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g\n", result.trace[n].eta_max);
        csv += buf;
    }
    return csv;
}

}  // namespace rbhp
