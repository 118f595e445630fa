#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbhp/greedy.hpp"

namespace rbhp {

/// Binary-tree node label: bit path from the root, first bit always 1;
/// children append 0 (left) or 1 (right).
struct BoolVec {
    std::vector<std::uint8_t> bits{1};

    BoolVec child(int side) const {
        BoolVec c = *this;
        c.bits.push_back(static_cast<std::uint8_t>(side));
        return c;
    }
    std::size_t level() const { return bits.size(); }
    std::string str() const {
        std::string s;
        for (auto b : bits) s += b ? '1' : '0';
        return s;
    }
    bool operator==(const BoolVec& o) const { return bits == o.bits; }
};

/// Node seed derivation: chains the global seed through the bit path, so
/// every subdomain draws an independent, reproducible training sample.
std::uint64_t derive_node_seed(std::uint64_t seed, const BoolVec& id);

struct TreeNode {
    BoolVec id;
    ParamBox box;
    // internal
    int split_axis = -1;
    std::unique_ptr<TreeNode> child0, child1;
    // leaf
    std::optional<RBSpace> space;
    double eta_max = 0.0;
    int leaf_index = -1;

    bool is_leaf() const { return !child0; }
};

struct DepthExceeded : std::runtime_error {
    explicit DepthExceeded(int l_max)
        : std::runtime_error("partition refinement exceeded the depth safeguard L_max=" + std::to_string(l_max)) {}
};

struct OutOfDomain : std::domain_error {
    using std::domain_error::domain_error;
};

struct LibraryConfig {
    int n_basis = 1;               // max RB dimension N per leaf
    double eps = 1e-2;             // target tolerance
    std::size_t train_size = 100;  // fresh sample size per subdomain
    std::uint64_t seed = 0;
    std::optional<Param> root_init;  // explicit initial parameter at the root
    int l_max = 40;                  // refinement depth safeguard
};

struct PartitionStats {
    int K = 0;
    int L = 0;  // depth: longest bit path among leaves
    std::vector<double> volumes;
    std::vector<double> longest_sides;   // h-hat per leaf
    std::vector<double> aspect_ratios;   // beta_k per leaf
    std::vector<int> basis_sizes;
    std::vector<double> leaf_eta_max;
    double volume_sum = 0.0;
    double quasi_uniformity = 1.0;     // xi-hat = min volume / max volume
    double root_beta = 1.0;            // 0.5 * min side ratio of the root box
    bool geometry_bound_ok = true;     // volume_k >= beta^(d-1) h-hat_k^d for all leaves
};

/// Library of local RB spaces over a binary-tree tensor-product partition
/// of the parameter domain; the online artifact.
class RBLibrary {
public:
    RBLibrary() = default;
    RBLibrary(std::unique_ptr<TreeNode> root, std::string descriptor, LibraryConfig config);

    const TreeNode& root() const { return *root_; }
    const std::string& descriptor() const { return descriptor_; }
    const LibraryConfig& config() const { return config_; }
    int num_leaves() const { return static_cast<int>(leaves_.size()); }
    int depth() const;
    const TreeNode& leaf(int k) const { return *leaves_[static_cast<std::size_t>(k)]; }
    long total_truth_solves() const { return truth_solves_; }
    void set_total_truth_solves(long n) { truth_solves_ = n; }

    /// Tree descent: child 0 for mu_axis < midpoint, child 1 otherwise
    /// (half-open convention; the global upper boundary is closed).
    /// Throws OutOfDomain when mu lies outside the closed root box.
    int locate(const Param& mu) const;

    struct Evaluation {
        Vector coeffs;
        int leaf = -1;
        double eta = 0.0;
    };
    /// Locate + reduced solve + estimator on the owning leaf.
    Evaluation evaluate(const AffineProblem& problem, const Param& mu) const;

    PartitionStats stats() const;

    /// Max estimator per leaf over fresh verification samples (factor x the
    /// build sample size). Reported, not asserted: the build certifies the
    /// tolerance on its training samples only.
    std::vector<double> verify_on_fresh_samples(const AffineProblem& problem, std::size_t factor = 10) const;

private:
    friend RBLibrary load_library(const std::string& path);
    void index_leaves();

    std::unique_ptr<TreeNode> root_;
    std::string descriptor_;
    LibraryConfig config_;
    std::vector<TreeNode*> leaves_;  // depth-first order
    long truth_solves_ = 0;
};

/// Level-synchronous partition loop: greedy on each active subdomain with a
/// fresh seeded training set; converged subdomains become leaves, the rest
/// split along their longest edge. Non-leaf spaces are discarded.
RBLibrary build_library(const AffineProblem& problem, const LibraryConfig& config);

/// Partition CSV: k, per-axis bounds, basis size, leaf eta_max.
std::string partition_csv(const RBLibrary& library);

}  // namespace rbhp
