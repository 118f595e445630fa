#include <doctest.h>

#include <array>
#include <cmath>

#include "rbhp/problems.hpp"
#include "rbhp/proximity.hpp"

using namespace rbhp;

namespace {

AffineProblem coarse_diffusion() {
    return build_diffusion_problem(std::make_shared<const Mesh>(generate_unit_square_mesh(10)), 0.105);
}

ProximityConfig config(int n, double eps, std::size_t train, std::uint64_t seed) {
    ProximityConfig cfg;
    cfg.n_basis = n;
    cfg.eps = eps;
    cfg.train_size = train;
    cfg.seed = seed;
    cfg.init_anchor = Param{0.0, 0.0};
    return cfg;
}

}  // namespace

TEST_CASE("proximity: loose tolerance keeps the root anchor as the single leaf") {
    const AffineProblem p = coarse_diffusion();
    const AnchorTree tree = build_library_proximity(p, config(2, 1e6, 50, 1));
    CHECK(tree.num_leaves() == 1);
    CHECK(tree.leaf(0).anchor == Param{0.0, 0.0});
    CHECK(tree.leaf(0).eta_max <= 1e6);
}

TEST_CASE("locate_proximity: nearest anchor wins, ties and equidistant points go left") {
    // hand-built two-leaf tree
    auto root = std::make_unique<AnchorNode>();
    root->anchor = Param{0.0, 0.0};
    root->child0 = std::make_unique<AnchorNode>();
    root->child0->anchor = Param{0.0, 0.0};
    root->child0->level = 2;
    root->child1 = std::make_unique<AnchorNode>();
    root->child1->anchor = Param{1.0, 0.0};
    root->child1->level = 2;
    const AnchorTree tree(std::move(root), ParamBox({-1.0, -1.0}, {1.0, 1.0}), "problem=diffusion", ProximityConfig{});

    CHECK(locate_proximity(tree, {0.2, 0.0}) == 0);   // 0.2 < 0.8
    CHECK(locate_proximity(tree, {0.9, 0.0}) == 1);
    CHECK(locate_proximity(tree, {0.5, 0.0}) == 0);   // equidistant: child 0
    CHECK_THROWS_AS(locate_proximity(tree, {3.0, 0.0}), OutOfDomain);
}

TEST_CASE("proximity build: anchor inheritance, certification, replay identity") {
    const AffineProblem p = coarse_diffusion();
    const ProximityConfig cfg = config(1, 0.15, 150, 3);
    const AnchorTree tree = build_library_proximity(p, cfg);
    REQUIRE(tree.num_leaves() >= 2);

    // child-0 anchors inherit along every left edge
    std::vector<const AnchorNode*> stack{&tree.root()};
    while (!stack.empty()) {
        const AnchorNode* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) continue;
        CHECK(node->child0->anchor == node->anchor);
        CHECK(node->child1->anchor != node->anchor);
        stack.push_back(node->child0.get());
        stack.push_back(node->child1.get());
    }

    for (int k = 0; k < tree.num_leaves(); ++k) {
        CHECK(tree.leaf(k).eta_max <= cfg.eps);
        CHECK(tree.leaf(k).space->size() <= cfg.n_basis);
    }

    // locate agrees with the membership record stored during the build
    const auto& points = tree.build_points();
    const auto& assignment = tree.build_assignment();
    REQUIRE(points.size() == assignment.size());
    REQUIRE(!points.empty());
    for (std::size_t i = 0; i < points.size(); ++i) {
        REQUIRE(assignment[i] >= 0);
        CHECK(locate_proximity(tree, points[i]) == assignment[i]);
    }
}

TEST_CASE("proximity regions are not boxes: bounding boxes of members overlap") {
    const AffineProblem p = coarse_diffusion();
    const AnchorTree tree = build_library_proximity(p, config(1, 0.08, 400, 11));
    REQUIRE(tree.num_leaves() >= 3);

    const auto& points = tree.build_points();
    const auto& assignment = tree.build_assignment();
    std::vector<std::array<double, 4>> bbox(static_cast<std::size_t>(tree.num_leaves()),
                                            {1e300, -1e300, 1e300, -1e300});
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& b = bbox[static_cast<std::size_t>(assignment[i])];
        b[0] = std::min(b[0], points[i][0]);
        b[1] = std::max(b[1], points[i][0]);
        b[2] = std::min(b[2], points[i][1]);
        b[3] = std::max(b[3], points[i][1]);
    }
    // some training point falls inside another leaf's bounding box: the
    // membership region cannot be the box itself
    bool found = false;
    for (std::size_t i = 0; i < points.size() && !found; ++i) {
        for (int k = 0; k < tree.num_leaves() && !found; ++k) {
            if (assignment[i] == k) continue;
            const auto& b = bbox[static_cast<std::size_t>(k)];
            if (points[i][0] >= b[0] && points[i][0] <= b[1] && points[i][1] >= b[2] && points[i][1] <= b[3])
                found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("proximity: deterministic rebuild") {
    const AffineProblem p = coarse_diffusion();
    const AnchorTree a = build_library_proximity(p, config(2, 0.1, 100, 9));
    const AnchorTree b = build_library_proximity(p, config(2, 0.1, 100, 9));
    REQUIRE(a.num_leaves() == b.num_leaves());
    for (int k = 0; k < a.num_leaves(); ++k) {
        CHECK(a.leaf(k).anchor == b.leaf(k).anchor);
        CHECK(a.leaf(k).eta_max == b.leaf(k).eta_max);
    }
}

TEST_CASE("proximity vs tree: comparable K at matching configuration") {
    const AffineProblem p = coarse_diffusion();
    LibraryConfig tree_cfg;
    tree_cfg.n_basis = 1;
    tree_cfg.eps = 0.1;
    tree_cfg.train_size = 150;
    tree_cfg.seed = 3;
    tree_cfg.root_init = Param{0.0, 0.0};
    const RBLibrary tree_lib = build_library(p, tree_cfg);
    const AnchorTree prox = build_library_proximity(p, config(1, 0.1, 150, 3));
    const double ratio = static_cast<double>(prox.num_leaves()) / tree_lib.num_leaves();
    CHECK(ratio <= 4.0);
    CHECK(ratio >= 0.25);
}
