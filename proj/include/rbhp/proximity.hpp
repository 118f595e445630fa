#pragma once

#include "rbhp/rb_library.hpp"

namespace rbhp {

/// Comparison partitioner: recursive splitting by Euclidean proximity to
/// anchor parameters. On refinement, child 0 inherits the node's anchor and
/// child 1 takes the greedy's first post-anchor selection; membership
/// regions are nearest-anchor cells (half-space intersections, not boxes).
struct AnchorNode {
    Param anchor;
    int level = 1;
    std::unique_ptr<AnchorNode> child0, child1;
    std::optional<RBSpace> space;
    double eta_max = 0.0;
    int leaf_index = -1;

    bool is_leaf() const { return !child0; }
};

struct EmptyRegion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProximityConfig {
    int n_basis = 1;
    double eps = 1e-2;
    std::size_t train_size = 100;
    std::uint64_t seed = 0;
    Param init_anchor;  // root anchor; empty means the domain center
    int l_max = 40;
};

class AnchorTree {
public:
    AnchorTree() = default;
    AnchorTree(std::unique_ptr<AnchorNode> root, ParamBox box, std::string descriptor, ProximityConfig config);

    const AnchorNode& root() const { return *root_; }
    const ParamBox& root_box() const { return box_; }
    const std::string& descriptor() const { return descriptor_; }
    const ProximityConfig& config() const { return config_; }
    int num_leaves() const { return static_cast<int>(leaves_.size()); }
    int depth() const;
    const AnchorNode& leaf(int k) const { return *leaves_[static_cast<std::size_t>(k)]; }
    long total_truth_solves() const { return truth_solves_; }
    void set_total_truth_solves(long n) { truth_solves_ = n; }

    /// Descend to the child with the nearer anchor; ties go to child 0.
    int locate(const Param& mu) const;
    RBLibrary::Evaluation evaluate(const AffineProblem& problem, const Param& mu) const;

    /// Training points consumed during the build and the leaf each one was
    /// certified under (replay data for the locate/membership identity).
    const std::vector<Param>& build_points() const { return build_points_; }
    const std::vector<int>& build_assignment() const { return build_assignment_; }
    void set_build_record(std::vector<Param> points, std::vector<int> assignment);

private:
    std::unique_ptr<AnchorNode> root_;
    ParamBox box_;
    std::string descriptor_;
    ProximityConfig config_;
    std::vector<AnchorNode*> leaves_;
    std::vector<Param> build_points_;
    std::vector<int> build_assignment_;
    long truth_solves_ = 0;
};

AnchorTree build_library_proximity(const AffineProblem& problem, const ProximityConfig& config);

int locate_proximity(const AnchorTree& tree, const Param& mu);

/// Partition CSV: k, anchor coordinates, basis size, leaf eta_max.
std::string proximity_partition_csv(const AnchorTree& tree);

double euclidean_distance(const Param& a, const Param& b);

}  // namespace rbhp
