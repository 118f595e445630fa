#include "rbhp/proximity.hpp"

#include <cmath>
#include <cstdio>

namespace rbhp {

double euclidean_distance(const Param& a, const Param& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

AnchorTree::AnchorTree(std::unique_ptr<AnchorNode> root, ParamBox box, std::string descriptor, ProximityConfig config)
    : root_(std::move(root)), box_(std::move(box)), descriptor_(std::move(descriptor)), config_(std::move(config)) {
    std::vector<AnchorNode*> stack{root_.get()};
    while (!stack.empty()) {
        AnchorNode* node = stack.back();
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

int AnchorTree::depth() const {
    int l = 0;
    for (const AnchorNode* leaf : leaves_) l = std::max(l, leaf->level);
    return l;
}

int AnchorTree::locate(const Param& mu) const {
    if (!box_.contains(mu)) throw OutOfDomain("locate_proximity: parameter outside domain " + to_string(mu));
    const AnchorNode* node = root_.get();
    while (!node->is_leaf()) {
        const double d0 = euclidean_distance(mu, node->child0->anchor);
        const double d1 = euclidean_distance(mu, node->child1->anchor);
        node = (d0 <= d1) ? node->child0.get() : node->child1.get();
    }
    return node->leaf_index;
}

RBLibrary::Evaluation AnchorTree::evaluate(const AffineProblem& problem, const Param& mu) const {
    RBLibrary::Evaluation ev;
    ev.leaf = locate(mu);
    const AnchorNode& node = *leaves_[static_cast<std::size_t>(ev.leaf)];
    ev.coeffs = node.space->solve(problem, mu);
    ev.eta = node.space->residual_norm(problem, mu, ev.coeffs) / problem.alpha_lb(mu);
    return ev;
}

void AnchorTree::set_build_record(std::vector<Param> points, std::vector<int> assignment) {
    build_points_ = std::move(points);
    build_assignment_ = std::move(assignment);
}

int locate_proximity(const AnchorTree& tree, const Param& mu) { return tree.locate(mu); }

namespace {

struct ActiveRegion {
    AnchorNode* node;
    std::vector<std::size_t> members;  // indices into the point store
};

// True when the proximity descent from the root reaches `target`.
bool descends_to(const AnchorNode* root, const AnchorNode* target, const Param& mu) {
    const AnchorNode* node = root;
    while (!node->is_leaf()) {
        if (node == target) return true;
        const double d0 = euclidean_distance(mu, node->child0->anchor);
        const double d1 = euclidean_distance(mu, node->child1->anchor);
        node = (d0 <= d1) ? node->child0.get() : node->child1.get();
    }
    return node == target;
}

}  // namespace

AnchorTree build_library_proximity(const AffineProblem& problem, const ProximityConfig& config) {
    if (!(config.eps > 0.0)) throw std::invalid_argument("build_library_proximity: eps must be positive");
    if (config.n_basis < 1) throw std::invalid_argument("build_library_proximity: N must be >= 1");

    const ParamBox& box = problem.domain;
    ProximityConfig cfg = config;
    if (cfg.init_anchor.empty()) cfg.init_anchor = box.center();
    if (!box.contains(cfg.init_anchor))
        throw std::invalid_argument("build_library_proximity: init anchor outside domain");

    auto root = std::make_unique<AnchorNode>();
    root->anchor = cfg.init_anchor;
    root->level = 1;

    std::vector<Param> store;        // every training point consumed by the build
    std::vector<const AnchorNode*> assignment;
    std::vector<ActiveRegion> active;
    std::uint64_t node_counter = 0;
    {
        ActiveRegion r;
        r.node = root.get();
        active.push_back(std::move(r));
    }

    long truth_solves = 0;
    while (!active.empty()) {
        std::vector<ActiveRegion> next;
        for (ActiveRegion& region : active) {
            AnchorNode* node = region.node;
            std::vector<std::size_t> members = std::move(region.members);

            // Top the region up to train_size points with root-box draws
            // filtered through the membership descent. Anchor cells have no
            // closed-form shape to sample directly, so rejection sampling is
            // what keeps the per-subdomain density equal to the tree
            // algorithm's fresh subdomain samples.
            Rng rng(mix_seed(mix_seed(cfg.seed, 0xA5), node_counter++));
            auto draw_batch = [&](std::size_t gross) {
                for (std::size_t b = 0; b < gross && members.size() < cfg.train_size; ++b) {
                    Param mu(static_cast<std::size_t>(box.dim()));
                    for (int j = 0; j < box.dim(); ++j)
                        mu[static_cast<std::size_t>(j)] =
                            box.is_frozen(j) ? box.lower()[static_cast<std::size_t>(j)]
                                             : rng.uniform(box.lower()[static_cast<std::size_t>(j)],
                                                           box.upper()[static_cast<std::size_t>(j)]);
                    if (descends_to(root.get(), node, mu)) {
                        members.push_back(store.size());
                        store.push_back(std::move(mu));
                        assignment.push_back(nullptr);
                    }
                }
            };
            draw_batch(cfg.train_size);
            if (members.empty()) {
                draw_batch(cfg.train_size * 10);  // one re-draw before giving up
                if (members.empty())
                    throw EmptyRegion("build_library_proximity: no training points reach an anchor region");
            }
            for (int extra = 0; members.size() < cfg.train_size && extra < 64; ++extra)
                draw_batch(cfg.train_size);

            TrainingSet train;
            train.box = box;
            train.seed = cfg.seed;
            train.points.push_back(node->anchor);
            for (std::size_t idx : members) {
                if (store[idx] != node->anchor) train.points.push_back(store[idx]);
            }

            GreedyResult res = greedy_build(problem, box, train, cfg.n_basis, cfg.eps, node->anchor);
            truth_solves += res.truth_solves;
            if (res.converged) {
                node->space = std::move(res.space);
                node->eta_max = res.final_eta_max;
                for (std::size_t idx : members) assignment[idx] = node;
            } else {
                if (node->level + 1 > cfg.l_max) throw DepthExceeded(cfg.l_max);
                // child 0 retains the anchor; child 1 takes the first
                // post-anchor greedy selection (the estimator argmax at n=1)
                Param child1_anchor;
                if (res.visited_indices.size() >= 2)
                    child1_anchor = train[res.visited_indices[1]];
                else if (res.next_index >= 0)
                    child1_anchor = res.next_param;
                else
                    throw std::logic_error("build_library_proximity: no candidate for the second anchor");

                node->child0 = std::make_unique<AnchorNode>();
                node->child0->anchor = node->anchor;
                node->child0->level = node->level + 1;
                node->child1 = std::make_unique<AnchorNode>();
                node->child1->anchor = child1_anchor;
                node->child1->level = node->level + 1;

                ActiveRegion r0, r1;
                r0.node = node->child0.get();
                r1.node = node->child1.get();
                for (std::size_t idx : members) {
                    const double d0 = euclidean_distance(store[idx], node->child0->anchor);
                    const double d1 = euclidean_distance(store[idx], node->child1->anchor);
                    (d0 <= d1 ? r0.members : r1.members).push_back(idx);
                }
                next.push_back(std::move(r0));
                next.push_back(std::move(r1));
            }
        }
        active = std::move(next);
    }

    AnchorTree tree(std::move(root), box, problem.descriptor, cfg);
    tree.set_total_truth_solves(truth_solves);
    // translate the build-time membership record (node pointers, stable
    // across tree construction) into final leaf indices
    std::vector<int> final_assignment(store.size(), -1);
    for (std::size_t i = 0; i < store.size(); ++i)
        if (assignment[i]) final_assignment[i] = assignment[i]->leaf_index;
    tree.set_build_record(std::move(store), std::move(final_assignment));
    return tree;
}

std::string proximity_partition_csv(const AnchorTree& tree) {
    const int d = tree.root_box().dim();
    std::string csv = "k";
    char buf[80];
    for (int j = 1; j <= d; ++j) {
        std::snprintf(buf, sizeof buf, ",anchor_%d", j);
        csv += buf;
    }
    csv += ",n,eta_max\n";
    for (int k = 0; k < tree.num_leaves(); ++k) {
        const AnchorNode& leaf = tree.leaf(k);
        std::snprintf(buf, sizeof buf, "%d", k + 1);
        csv += buf;
        for (int j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", leaf.anchor[static_cast<std::size_t>(j)]);
            csv += buf;
        }
        std::snprintf(buf, sizeof buf, ",%d,%.17g\n", leaf.space ? leaf.space->size() : 0, leaf.eta_max);
        csv += buf;
    }
    return csv;
}

}  // namespace rbhp
