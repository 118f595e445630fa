#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

namespace rbhp {

/// 2D P1 triangular mesh with homogeneous Dirichlet boundary handled by
/// restriction to interior degrees of freedom.
///
/// Conventions:
///  - triangles are counter-clockwise (positive signed area),
///  - interior_dof_map[node] is the contiguous interior dof index, or -1
///    for boundary nodes,
///  - node ordering is deterministic for fixed generator inputs.
struct Mesh {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::unordered_set<int> boundary_nodes;
    std::vector<int> interior_dof_map;  // node index -> interior dof or -1

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_interior() const { return n_interior_; }
    bool is_boundary(int node) const { return boundary_nodes.count(node) > 0; }

    double triangle_area(int t) const;
    double total_area() const;

    // Fills interior_dof_map from boundary_nodes; called by the generators.
    void build_interior_map();

    int n_interior_ = 0;
};

/// Structured triangulation of [0,1]^2 with n_per_side cells per side and a
/// fixed diagonal split, giving 2*n^2 triangles and (n-1)^2 interior nodes.
Mesh generate_unit_square_mesh(int n_per_side);

/// Polar-ring triangulation of the disk of given radius centered at the
/// origin. Ring k of M carries c*k nodes, so the triangle count is c*M^2;
/// (c, M) are chosen to land within 15% of target_triangles. Boundary nodes
/// sit exactly on the circle.
Mesh generate_disk_mesh(double radius, int target_triangles);

/// Plain-text export: one "x y" line per node, then one "i j k" line per
/// triangle (0-based). Lines are distinguishable by token count.
void export_mesh(const Mesh& mesh, std::ostream& out);
void export_mesh(const Mesh& mesh, const std::string& path);

}  // namespace rbhp
