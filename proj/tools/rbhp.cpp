// Command-line driver: offline library builds, online evaluation, and the
// convergence / partition studies.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rbhp/csv.hpp"
#include "rbhp/figures.hpp"
#include "rbhp/library_io.hpp"
#include "rbhp/problems.hpp"
#include "rbhp/sweep.hpp"

namespace {

using namespace rbhp;

Param parse_param(const std::string& text) {
    Param mu;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) mu.push_back(std::strtod(item.c_str(), nullptr));
    return mu;
}

// paper-style defaults; "random" leaves the choice to the seeded greedy
std::optional<Param> resolve_init(const std::string& init, const std::string& problem) {
    if (init == "random") return std::nullopt;
    if (init != "auto") return parse_param(init);
    if (problem == "convdiff-II") return Param{0.0, 10.0};
    return Param{0.0, 0.0};
}

std::size_t default_linear_train(const std::string& problem) {
    return (problem == "convdiff-I" || problem == "convdiff-II") ? 100 : 10000;
}

struct ProblemOptions {
    std::string name = "diffusion";
    int mesh_n = 0;
    int mesh_target = 0;
    double alpha = 0.0;

    AffineProblem build() const { return build_named_problem(name, MeshParams{mesh_n, mesh_target}, alpha); }
};

void add_problem_options(CLI::App* cmd, ProblemOptions& opts) {
    cmd->add_option("--problem", opts.name, "diffusion | convdiff-I | convdiff-II | convdiff-III")
        ->default_val("diffusion");
    cmd->add_option("--mesh-n", opts.mesh_n, "unit-square cells per side (0 = default 44)");
    cmd->add_option("--mesh-target", opts.mesh_target, "disk triangle-count target (0 = default 3689)");
    cmd->add_option("--alpha", opts.alpha, "diffusion coefficient scale (0 = default 0.105)");
}

std::string detect_magic(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    char magic[4] = {0, 0, 0, 0};
    f.read(magic, 4);
    return std::string(magic, 4);
}

// Flat key=value config files mirroring the flags; values given on the
// command line win. '#' starts a comment line.
class ConfigOverlay {
public:
    void load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw CLI::ValidationError("--config", "cannot open " + path);
        std::string line;
        while (std::getline(f, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key=value: " + line);
            kv_[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }

    template <typename T>
    void apply(const CLI::App* sub, const std::string& key, T& target) const {
        const auto it = kv_.find(key);
        if (it == kv_.end() || sub->count("--" + key) > 0) return;
        parse_into(it->second, target);
    }

private:
    static void parse_into(const std::string& v, std::string& out) { out = v; }
    static void parse_into(const std::string& v, bool& out) { out = v == "true" || v == "1"; }
    static void parse_into(const std::string& v, int& out) { out = std::stoi(v); }
    static void parse_into(const std::string& v, double& out) { out = std::strtod(v.c_str(), nullptr); }
    static void parse_into(const std::string& v, std::size_t& out) { out = std::stoull(v); }
    static void parse_into(const std::string& v, std::vector<double>& out) {
        out.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::strtod(item.c_str(), nullptr));
    }
    static void parse_into(const std::string& v, std::vector<int>& out) {
        out.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }

    std::map<std::string, std::string> kv_;
};

void emit(const std::string& out, const std::string& content) {
    if (out.empty())
        std::fputs(content.c_str(), stdout);
    else
        write_text_file(out, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rbhp: certified reduced-basis libraries over binary-tree parameter partitions"};
    app.require_subcommand(1);

    // ---- offline ----
    auto* offline = app.add_subcommand("offline", "build a library and save it");
    ProblemOptions off_prob;
    std::string off_alg = "tree", off_init = "auto", off_out = "library.rbhp", off_csv;
    int off_n = 4, off_lmax = 40;
    double off_eps = 1e-3;
    std::size_t off_train = 1000;
    std::uint64_t off_seed = 0;
    std::string off_cfg;
    add_problem_options(offline, off_prob);
    offline->add_option("--config", off_cfg, "flat key=value file mirroring the flags");
    offline->add_option("--algorithm", off_alg, "tree | proximity")->default_val("tree");
    offline->add_option("--N", off_n, "max RB dimension per subdomain");
    offline->add_option("--eps", off_eps, "target tolerance");
    offline->add_option("--train-size", off_train, "training points per subdomain");
    offline->add_option("--seed", off_seed, "RNG seed");
    offline->add_option("--init", off_init, "initial parameter: auto | random | v1,v2");
    offline->add_option("--l-max", off_lmax, "refinement depth safeguard");
    offline->add_option("--out", off_out, "library output path");
    offline->add_option("--partition-csv", off_csv, "also write the partition CSV here");

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "load a library and evaluate parameters");
    std::string eval_lib, eval_out;
    std::vector<std::string> eval_mus;
    std::string eval_cfg;
    eval->add_option("--config", eval_cfg, "flat key=value file mirroring the flags");
    eval->add_option("--library", eval_lib, "library file (.rbhp or .rbpx)");
    eval->add_option("--mu", eval_mus, "parameter value v1,v2 (repeatable)");
    eval->add_option("--out", eval_out, "output CSV (default stdout)");

    // ---- linear ----
    auto* linear = app.add_subcommand("linear", "full-domain greedy convergence study");
    ProblemOptions lin_prob;
    std::string lin_init = "auto", lin_out;
    int lin_n = 20;
    std::size_t lin_train = 0;
    std::uint64_t lin_seed = 0;
    std::string lin_cfg;
    add_problem_options(linear, lin_prob);
    linear->add_option("--config", lin_cfg, "flat key=value file mirroring the flags");
    linear->add_option("--N", lin_n, "basis size to grow to");
    linear->add_option("--train-size", lin_train, "training set size (0 = per-problem default)");
    linear->add_option("--seed", lin_seed, "RNG seed");
    linear->add_option("--init", lin_init, "initial parameter: auto | random | v1,v2");
    linear->add_option("--out", lin_out, "output CSV (default stdout)");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "K vs eps study over a list of (N, eps)");
    ProblemOptions sw_prob;
    std::string sw_alg = "tree", sw_init = "auto", sw_out, sw_persist;
    std::vector<int> sw_n{1};
    std::vector<double> sw_eps;
    std::size_t sw_train = 1000;
    std::uint64_t sw_seed = 0;
    int sw_lmax = 40;
    bool sw_timings = false;
    std::string sw_cfg;
    add_problem_options(sweep, sw_prob);
    sweep->add_option("--config", sw_cfg, "flat key=value file mirroring the flags");
    sweep->add_option("--algorithm", sw_alg, "tree | proximity");
    sweep->add_option("--N", sw_n, "RB dimensions (repeatable)");
    sweep->add_option("--eps", sw_eps, "tolerances, strictly decreasing (repeatable)");
    sweep->add_option("--train-size", sw_train, "training points per subdomain");
    sweep->add_option("--seed", sw_seed, "RNG seed");
    sweep->add_option("--init", sw_init, "root initial parameter: auto | random | v1,v2");
    sweep->add_option("--l-max", sw_lmax, "refinement depth safeguard");
    sweep->add_option("--persist-prefix", sw_persist, "save libraries for the smallest eps under this prefix");
    sweep->add_flag("--timings", sw_timings, "append a wall-clock column (non-reproducible)");
    sweep->add_option("--out", sw_out, "output CSV (default stdout)");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "log-log slope of K vs 1/eps from a sweep CSV");
    std::string fit_in, fit_alg = "tree", fit_out;
    int fit_n = 1;
    std::string fit_cfg;
    fit->add_option("--config", fit_cfg, "flat key=value file mirroring the flags");
    fit->add_option("--in", fit_in, "sweep CSV path");
    fit->add_option("--N", fit_n, "RB dimension to select");
    fit->add_option("--algorithm", fit_alg, "tree | proximity");
    fit->add_option("--out", fit_out, "output CSV (default stdout)");

    // ---- figure ----
    auto* figure = app.add_subcommand("figure", "partition figure (SVG + CSV twin) from a library file");
    std::string fig_lib, fig_out = "partition.svg";
    std::string fig_cfg;
    figure->add_option("--config", fig_cfg, "flat key=value file mirroring the flags");
    figure->add_option("--library", fig_lib, "library file (.rbhp or .rbpx)");
    figure->add_option("--out", fig_out, "SVG output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*offline) {
            ConfigOverlay overlay;
            if (!off_cfg.empty()) overlay.load(off_cfg);
            overlay.apply(offline, "problem", off_prob.name);
            overlay.apply(offline, "mesh-n", off_prob.mesh_n);
            overlay.apply(offline, "mesh-target", off_prob.mesh_target);
            overlay.apply(offline, "alpha", off_prob.alpha);
            overlay.apply(offline, "algorithm", off_alg);
            overlay.apply(offline, "N", off_n);
            overlay.apply(offline, "eps", off_eps);
            overlay.apply(offline, "train-size", off_train);
            overlay.apply(offline, "seed", off_seed);
            overlay.apply(offline, "init", off_init);
            overlay.apply(offline, "l-max", off_lmax);
            overlay.apply(offline, "out", off_out);
            overlay.apply(offline, "partition-csv", off_csv);
            const AffineProblem problem = off_prob.build();
            const auto init = resolve_init(off_init, off_prob.name);
            if (off_alg == "tree") {
                LibraryConfig cfg;
                cfg.n_basis = off_n;
                cfg.eps = off_eps;
                cfg.train_size = off_train;
                cfg.seed = off_seed;
                cfg.root_init = init;
                cfg.l_max = off_lmax;
                const RBLibrary library = build_library(problem, cfg);
                const auto stats = save_library(library, off_out);
                if (!off_csv.empty()) write_text_file(off_csv, partition_csv(library));
                std::printf("wrote %s: K=%d L=%d truth_solves=%ld bytes=%llu\n", off_out.c_str(),
                            library.num_leaves(), library.depth(), library.total_truth_solves(),
                            static_cast<unsigned long long>(stats.total_bytes));
            } else if (off_alg == "proximity") {
                ProximityConfig cfg;
                cfg.n_basis = off_n;
                cfg.eps = off_eps;
                cfg.train_size = off_train;
                cfg.seed = off_seed;
                if (init) cfg.init_anchor = *init;
                cfg.l_max = off_lmax;
                const AnchorTree tree = build_library_proximity(problem, cfg);
                const auto stats = save_proximity_library(tree, off_out);
                if (!off_csv.empty()) write_text_file(off_csv, proximity_partition_csv(tree));
                std::printf("wrote %s: K=%d L=%d truth_solves=%ld bytes=%llu\n", off_out.c_str(), tree.num_leaves(),
                            tree.depth(), tree.total_truth_solves(),
                            static_cast<unsigned long long>(stats.total_bytes));
            } else {
                throw CLI::ValidationError("--algorithm must be tree or proximity");
            }
        } else if (*eval) {
            ConfigOverlay overlay;
            if (!eval_cfg.empty()) overlay.load(eval_cfg);
            overlay.apply(eval, "library", eval_lib);
            overlay.apply(eval, "out", eval_out);
            if (eval_lib.empty()) throw CLI::ValidationError("--library", "required");
            if (eval_mus.empty()) throw CLI::ValidationError("--mu", "at least one parameter required");
            const std::string magic = detect_magic(eval_lib);
            std::string csv;
            if (magic == "RBHP") {
                const RBLibrary library = load_library(eval_lib);
                const AffineProblem problem = make_online_problem(library.descriptor());
                const int d = problem.domain.dim();
                csv = "";
                for (int j = 1; j <= d; ++j) csv += (j > 1 ? ",mu_" : "mu_") + std::to_string(j);
                csv += ",k,n,eta\n";
                for (const auto& text : eval_mus) {
                    const Param mu = parse_param(text);
                    const auto ev = library.evaluate(problem, mu);
                    for (int j = 0; j < d; ++j) csv += (j ? "," : "") + fmt_double(mu[static_cast<std::size_t>(j)]);
                    csv += "," + std::to_string(ev.leaf + 1) + "," + std::to_string(ev.coeffs.size()) + "," +
                           fmt_double(ev.eta) + "\n";
                }
            } else if (magic == "RBPX") {
                const AnchorTree tree = load_proximity_library(eval_lib);
                const AffineProblem problem = make_online_problem(tree.descriptor());
                const int d = problem.domain.dim();
                for (int j = 1; j <= d; ++j) csv += (j > 1 ? ",mu_" : "mu_") + std::to_string(j);
                csv += ",k,n,eta\n";
                for (const auto& text : eval_mus) {
                    const Param mu = parse_param(text);
                    const auto ev = tree.evaluate(problem, mu);
                    for (int j = 0; j < d; ++j) csv += (j ? "," : "") + fmt_double(mu[static_cast<std::size_t>(j)]);
                    csv += "," + std::to_string(ev.leaf + 1) + "," + std::to_string(ev.coeffs.size()) + "," +
                           fmt_double(ev.eta) + "\n";
                }
            } else {
                throw BadLibraryFile("unrecognized library file " + eval_lib);
            }
            emit(eval_out, csv);
        } else if (*linear) {
            ConfigOverlay overlay;
            if (!lin_cfg.empty()) overlay.load(lin_cfg);
            overlay.apply(linear, "problem", lin_prob.name);
            overlay.apply(linear, "mesh-n", lin_prob.mesh_n);
            overlay.apply(linear, "mesh-target", lin_prob.mesh_target);
            overlay.apply(linear, "alpha", lin_prob.alpha);
            overlay.apply(linear, "N", lin_n);
            overlay.apply(linear, "train-size", lin_train);
            overlay.apply(linear, "seed", lin_seed);
            overlay.apply(linear, "init", lin_init);
            overlay.apply(linear, "out", lin_out);
            const AffineProblem problem = lin_prob.build();
            const std::size_t train = lin_train ? lin_train : default_linear_train(lin_prob.name);
            const auto result =
                run_linear_convergence(problem, lin_n, train, lin_seed, resolve_init(lin_init, lin_prob.name));
            emit(lin_out, result.csv);
        } else if (*sweep) {
            ConfigOverlay overlay;
            if (!sw_cfg.empty()) overlay.load(sw_cfg);
            overlay.apply(sweep, "problem", sw_prob.name);
            overlay.apply(sweep, "mesh-n", sw_prob.mesh_n);
            overlay.apply(sweep, "mesh-target", sw_prob.mesh_target);
            overlay.apply(sweep, "alpha", sw_prob.alpha);
            overlay.apply(sweep, "algorithm", sw_alg);
            overlay.apply(sweep, "N", sw_n);
            overlay.apply(sweep, "eps", sw_eps);
            overlay.apply(sweep, "train-size", sw_train);
            overlay.apply(sweep, "seed", sw_seed);
            overlay.apply(sweep, "init", sw_init);
            overlay.apply(sweep, "l-max", sw_lmax);
            overlay.apply(sweep, "persist-prefix", sw_persist);
            overlay.apply(sweep, "timings", sw_timings);
            overlay.apply(sweep, "out", sw_out);
            if (sw_eps.empty()) throw CLI::ValidationError("--eps", "at least one tolerance required");
            const AffineProblem problem = sw_prob.build();
            SweepConfig cfg;
            cfg.algorithm = sw_alg;
            cfg.n_values = sw_n;
            cfg.eps_values = sw_eps;
            cfg.train_size = sw_train;
            cfg.seed = sw_seed;
            cfg.init = resolve_init(sw_init, sw_prob.name);
            cfg.l_max = sw_lmax;
            cfg.persist_prefix = sw_persist;
            const auto records = run_epsilon_sweep(problem, cfg);
            emit(sw_out, sweep_csv(records, sw_timings));
        } else if (*fit) {
            ConfigOverlay overlay;
            if (!fit_cfg.empty()) overlay.load(fit_cfg);
            overlay.apply(fit, "in", fit_in);
            overlay.apply(fit, "N", fit_n);
            overlay.apply(fit, "algorithm", fit_alg);
            overlay.apply(fit, "out", fit_out);
            if (fit_in.empty()) throw CLI::ValidationError("--in", "required");
            const auto f = fit_loglog_slope_csv(read_text_file(fit_in), fit_n, fit_alg);
            std::string csv = "algorithm,N,slope,intercept,r_squared,points\n";
            csv += fit_alg + "," + std::to_string(fit_n) + "," + fmt_double(f.slope) + "," + fmt_double(f.intercept) +
                   "," + fmt_double(f.r_squared) + "," + std::to_string(f.points) + "\n";
            emit(fit_out, csv);
        } else if (*figure) {
            ConfigOverlay overlay;
            if (!fig_cfg.empty()) overlay.load(fig_cfg);
            overlay.apply(figure, "library", fig_lib);
            overlay.apply(figure, "out", fig_out);
            if (fig_lib.empty()) throw CLI::ValidationError("--library", "required");
            const std::string magic = detect_magic(fig_lib);
            FigureResult result;
            if (magic == "RBHP") {
                result = export_partition_figure(load_library(fig_lib), fig_out);
            } else if (magic == "RBPX") {
                result = export_partition_figure(load_proximity_library(fig_lib), fig_out);
            } else {
                throw BadLibraryFile("unrecognized library file " + fig_lib);
            }
            if (result.wrote_svg)
                std::printf("wrote %s and %s\n", result.svg_path.c_str(), result.csv_path.c_str());
            else
                std::printf("wrote %s (SVG skipped: effective dimension is 1)\n", result.csv_path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
