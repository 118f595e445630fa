#include "rbhp/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "rbhp/csv.hpp"

namespace rbhp {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<SweepRecord> run_epsilon_sweep(const AffineProblem& problem, const SweepConfig& config) {
    if (config.n_values.empty() || config.eps_values.empty())
        throw std::invalid_argument("run_epsilon_sweep: empty N or eps list");
    for (std::size_t i = 1; i < config.eps_values.size(); ++i)
        if (!(config.eps_values[i] < config.eps_values[i - 1]))
            throw std::invalid_argument("run_epsilon_sweep: eps list must be strictly decreasing");
    if (config.algorithm != "tree" && config.algorithm != "proximity")
        throw std::invalid_argument("run_epsilon_sweep: algorithm must be tree or proximity");

    std::vector<SweepRecord> records;
    for (int n : config.n_values) {
        for (std::size_t e = 0; e < config.eps_values.size(); ++e) {
            const double eps = config.eps_values[e];
            const bool persist = !config.persist_prefix.empty() && e + 1 == config.eps_values.size();
            SweepRecord rec;
            rec.algorithm = config.algorithm;
            rec.n_basis = n;
            rec.eps = eps;
            const double t0 = now_seconds();
            try {
                if (config.algorithm == "tree") {
                    LibraryConfig lc;
                    lc.n_basis = n;
                    lc.eps = eps;
                    lc.train_size = config.train_size;
                    lc.seed = config.seed;
                    lc.root_init = config.init;
                    lc.l_max = config.l_max;
                    const RBLibrary library = build_library(problem, lc);
                    rec.num_subdomains = library.num_leaves();
                    rec.depth = library.depth();
                    rec.quasi_uniformity = library.stats().quasi_uniformity;
                    rec.truth_solves = library.total_truth_solves();
                    if (persist)
                        save_library(library, config.persist_prefix + "_tree_N" + std::to_string(n) + ".rbhp");
                } else {
                    ProximityConfig pc;
                    pc.n_basis = n;
                    pc.eps = eps;
                    pc.train_size = config.train_size;
                    pc.seed = config.seed;
                    if (config.init) pc.init_anchor = *config.init;
                    pc.l_max = config.l_max;
                    const AnchorTree tree = build_library_proximity(problem, pc);
                    rec.num_subdomains = tree.num_leaves();
                    rec.depth = tree.depth();
                    rec.quasi_uniformity = 0.0;  // anchor cells have no closed-form volume
                    rec.truth_solves = tree.total_truth_solves();
                    if (persist)
                        save_proximity_library(tree, config.persist_prefix + "_proximity_N" + std::to_string(n) + ".rbpx");
                }
            } catch (const DepthExceeded&) {
                rec.depth_exceeded = true;  // flagged row, not a crash
            }
            rec.wall_seconds = now_seconds() - t0;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::string sweep_csv(const std::vector<SweepRecord>& records, bool include_timings) {
    std::string csv = "algorithm,N,eps,K,L,xi_hat,truth_solves,status";
    if (include_timings) csv += ",wall_s";
    csv += "\n";
    for (const auto& r : records) {
        csv += r.algorithm;
        csv += "," + std::to_string(r.n_basis);
        csv += "," + fmt_double(r.eps);
        csv += "," + std::to_string(r.num_subdomains);
        csv += "," + std::to_string(r.depth);
        csv += "," + fmt_double(r.quasi_uniformity);
        csv += "," + std::to_string(r.truth_solves);
        csv += r.depth_exceeded ? ",depth_exceeded" : ",ok";
        if (include_timings) csv += "," + fmt_double(r.wall_seconds);
        csv += "\n";
    }
    return csv;
}

std::vector<SweepRecord> parse_sweep_csv(const std::string& text) {
    const CsvTable table = parse_csv(text);
    const int c_alg = table.column("algorithm");
    const int c_n = table.column("N");
    const int c_eps = table.column("eps");
    const int c_k = table.column("K");
    const int c_l = table.column("L");
    const int c_xi = table.column("xi_hat");
    const int c_ts = table.column("truth_solves");
    const int c_status = table.column("status");
    if (c_alg < 0 || c_n < 0 || c_eps < 0 || c_k < 0)
        throw std::invalid_argument("parse_sweep_csv: missing required columns");
    std::vector<SweepRecord> records;
    for (const auto& row : table.rows) {
        SweepRecord r;
        r.algorithm = row[static_cast<std::size_t>(c_alg)];
        r.n_basis = std::stoi(row[static_cast<std::size_t>(c_n)]);
        r.eps = std::strtod(row[static_cast<std::size_t>(c_eps)].c_str(), nullptr);
        r.num_subdomains = std::stoi(row[static_cast<std::size_t>(c_k)]);
        if (c_l >= 0) r.depth = std::stoi(row[static_cast<std::size_t>(c_l)]);
        if (c_xi >= 0) r.quasi_uniformity = std::strtod(row[static_cast<std::size_t>(c_xi)].c_str(), nullptr);
        if (c_ts >= 0) r.truth_solves = std::stol(row[static_cast<std::size_t>(c_ts)]);
        if (c_status >= 0) r.depth_exceeded = row[static_cast<std::size_t>(c_status)] == "depth_exceeded";
        records.push_back(std::move(r));
    }
    return records;
}

LinearConvergenceResult run_linear_convergence(const AffineProblem& problem, int n_max, std::size_t train_size,
                                               std::uint64_t seed, const std::optional<Param>& init) {
    TrainingSet train = TrainingSet::uniform(problem.domain, train_size, mix_seed(seed, 11));
    std::optional<Param> init_param = init;
    if (init_param) train = train.with_prepended(*init_param);
    LinearConvergenceResult out;
    // tol far below reach: the study always runs to n_max
    out.greedy = greedy_build(problem, problem.domain, train, n_max, 1e-300, init_param);
    out.csv = greedy_trace_csv(out.greedy, problem.domain.dim());
    return out;
}

SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, int n_basis, const std::string& algorithm) {
    std::vector<double> xs, ys;  // x = log(1/eps), y = log K
    for (const auto& r : records) {
        if (r.algorithm != algorithm || r.n_basis != n_basis || r.depth_exceeded) continue;
        if (r.num_subdomains <= 1) continue;  // the max{1,.} plateau carries no rate
        xs.push_back(std::log(1.0 / r.eps));
        ys.push_back(std::log(static_cast<double>(r.num_subdomains)));
    }
    if (xs.size() < 3) throw InsufficientData("fit_loglog_slope: need at least 3 rows with K > 1");

    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    SlopeFit fit;
    fit.points = static_cast<int>(xs.size());
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

SlopeFit fit_loglog_slope_csv(const std::string& csv_text, int n_basis, const std::string& algorithm) {
    return fit_loglog_slope(parse_sweep_csv(csv_text), n_basis, algorithm);
}

double theoretical_slope(int dim, int n_basis) {
    return dim / std::pow(static_cast<double>(n_basis), 1.0 / dim);
}

}  // namespace rbhp
