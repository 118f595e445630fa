#include "rbhp/rb_library.hpp"

#include <cmath>
#include <cstdio>

namespace rbhp {

std::uint64_t derive_node_seed(std::uint64_t seed, const BoolVec& id) {
    std::uint64_t s = mix_seed(seed, 0x7265656bULL);
    for (auto b : id.bits) s = mix_seed(s, b + 2u);
    return s;
}

RBLibrary::RBLibrary(std::unique_ptr<TreeNode> root, std::string descriptor, LibraryConfig config)
    : root_(std::move(root)), descriptor_(std::move(descriptor)), config_(std::move(config)) {
    index_leaves();
}

void RBLibrary::index_leaves() {
    leaves_.clear();
    // depth-first, left child first: leaf order is lexicographic in the bit path
    std::vector<TreeNode*> stack{root_.get()};
    while (!stack.empty()) {
        TreeNode* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) {
            node->leaf_index = static_cast<int>(leaves_.size());
            leaves_.push_back(node);
        } else {
            stack.push_back(node->child1.get());
            stack.push_back(node->child0.get());
        }
    }
}

int RBLibrary::depth() const {
    int l = 0;
    for (const TreeNode* leaf : leaves_) l = std::max(l, static_cast<int>(leaf->id.level()));
    return l;
}

int RBLibrary::locate(const Param& mu) const {
    if (!root_->box.contains(mu)) throw OutOfDomain("locate: parameter outside domain " + to_string(mu));
    const TreeNode* node = root_.get();
    while (!node->is_leaf()) {
        const double mid = node->child0->box.upper()[static_cast<std::size_t>(node->split_axis)];
        node = (mu[static_cast<std::size_t>(node->split_axis)] < mid) ? node->child0.get() : node->child1.get();
    }
    return node->leaf_index;
}

RBLibrary::Evaluation RBLibrary::evaluate(const AffineProblem& problem, const Param& mu) const {
    Evaluation ev;
    ev.leaf = locate(mu);
    const TreeNode& node = *leaves_[static_cast<std::size_t>(ev.leaf)];
    ev.coeffs = node.space->solve(problem, mu);
    ev.eta = node.space->residual_norm(problem, mu, ev.coeffs) / problem.alpha_lb(mu);
    return ev;
}

PartitionStats RBLibrary::stats() const {
    PartitionStats st;
    st.K = num_leaves();
    st.L = depth();
    const int d_eff = root_->box.effective_dim();
    st.root_beta = 0.5 * root_->box.aspect_ratio();
    double vol_min = 0.0, vol_max = 0.0;
    for (const TreeNode* leaf : leaves_) {
        const double vol = leaf->box.volume();
        const double h_hat = leaf->box.longest_side();
        st.volumes.push_back(vol);
        st.longest_sides.push_back(h_hat);
        st.aspect_ratios.push_back(leaf->box.aspect_ratio());
        st.basis_sizes.push_back(leaf->space ? leaf->space->size() : 0);
        st.leaf_eta_max.push_back(leaf->eta_max);
        st.volume_sum += vol;
        vol_min = st.volumes.size() == 1 ? vol : std::min(vol_min, vol);
        vol_max = std::max(vol_max, vol);
        if (vol < std::pow(st.root_beta, d_eff - 1) * std::pow(h_hat, d_eff) * (1.0 - 1e-12))
            st.geometry_bound_ok = false;
    }
    st.quasi_uniformity = vol_max > 0.0 ? vol_min / vol_max : 1.0;
    return st;
}

std::vector<double> RBLibrary::verify_on_fresh_samples(const AffineProblem& problem, std::size_t factor) const {
    std::vector<double> worst;
    worst.reserve(leaves_.size());
    for (const TreeNode* leaf : leaves_) {
        const auto sample = TrainingSet::uniform(leaf->box, config_.train_size * factor,
                                                 mix_seed(derive_node_seed(config_.seed, leaf->id), 17));
        double eta_max = 0.0;
        for (const auto& mu : sample.points) eta_max = std::max(eta_max, leaf->space->estimate_error(problem, mu));
        worst.push_back(eta_max);
    }
    return worst;
}

RBLibrary build_library(const AffineProblem& problem, const LibraryConfig& config) {
    if (!(config.eps > 0.0)) throw std::invalid_argument("build_library: eps must be positive");
    if (config.n_basis < 1) throw std::invalid_argument("build_library: N must be >= 1");
    if (config.train_size < static_cast<std::size_t>(config.n_basis))
        throw std::invalid_argument("build_library: train_size must be >= N");

    auto root = std::make_unique<TreeNode>();
    root->id = BoolVec{};
    root->box = problem.domain;

    long truth_solves = 0;
    std::vector<TreeNode*> active{root.get()};
    for (int level = 1; !active.empty(); ++level) {
        std::vector<TreeNode*> next;
        for (TreeNode* node : active) {
            const std::uint64_t node_seed = derive_node_seed(config.seed, node->id);
            TrainingSet train = TrainingSet::uniform(node->box, config.train_size, mix_seed(node_seed, 11));
            std::optional<Param> init;
            if (node->id.level() == 1 && config.root_init) {
                train = train.with_prepended(*config.root_init);
                init = *config.root_init;
            }
            // non-root nodes pick the initial parameter randomly from their set
            GreedyResult res = greedy_build(problem, node->box, train, config.n_basis, config.eps, init);
            truth_solves += res.truth_solves;
            if (res.converged) {
                node->space = std::move(res.space);
                node->eta_max = res.final_eta_max;
            } else {
                if (level + 1 > config.l_max) throw DepthExceeded(config.l_max);
                auto split = split_longest_edge(node->box);
                node->split_axis = split.axis;
                node->child0 = std::make_unique<TreeNode>();
                node->child0->id = node->id.child(0);
                node->child0->box = std::move(split.left);
                node->child1 = std::make_unique<TreeNode>();
                node->child1->id = node->id.child(1);
                node->child1->box = std::move(split.right);
                next.push_back(node->child0.get());
                next.push_back(node->child1.get());
            }
        }
        active = std::move(next);
    }

    RBLibrary library(std::move(root), problem.descriptor, config);
    library.set_total_truth_solves(truth_solves);
    return library;
}

std::string partition_csv(const RBLibrary& library) {
    const int d = library.root().box.dim();
    std::string csv = "k";
    char buf[80];
    for (int j = 1; j <= d; ++j) {
        std::snprintf(buf, sizeof buf, ",lo_%d,hi_%d", j, j);
        csv += buf;
    }
    csv += ",n,eta_max\n";
    for (int k = 0; k < library.num_leaves(); ++k) {
        const TreeNode& leaf = library.leaf(k);
        std::snprintf(buf, sizeof buf, "%d", k + 1);
        csv += buf;
        for (int j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", leaf.box.lower()[static_cast<std::size_t>(j)],
                          leaf.box.upper()[static_cast<std::size_t>(j)]);
            csv += buf;
        }
        std::snprintf(buf, sizeof buf, ",%d,%.17g\n", leaf.space ? leaf.space->size() : 0, leaf.eta_max);
        csv += buf;
    }
    return csv;
}

}  // namespace rbhp
