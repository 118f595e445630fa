#include "rbhp/assembly.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace rbhp {

bool OperatorMatrix::symmetry_within(double tol) const {
    SpMat diff = SpMat(mat.transpose()) - mat;
    double max_diff = 0.0, max_abs = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
            max_diff = std::max(max_diff, std::abs(it.value()));
    for (int k = 0; k < mat.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat, k); it; ++it)
            max_abs = std::max(max_abs, std::abs(it.value()));
    return max_diff <= tol * max_abs;
}

namespace {

struct TriGeom {
    std::array<double, 3> bx, by;  // constant P1 gradients
    double area;
    std::array<std::array<double, 2>, 3> p;
};

TriGeom tri_geometry(const Mesh& mesh, int t) {
    TriGeom g;
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) g.p[static_cast<std::size_t>(k)] = mesh.nodes[static_cast<std::size_t>(tri[k])];
    const auto& a = g.p[0];
    const auto& b = g.p[1];
    const auto& c = g.p[2];
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    g.area = 0.5 * det;
    // grad phi_k = ( y_{k+1} - y_{k+2}, x_{k+2} - x_{k+1} ) / det
    for (int k = 0; k < 3; ++k) {
        const auto& pn = g.p[static_cast<std::size_t>((k + 1) % 3)];
        const auto& pp = g.p[static_cast<std::size_t>((k + 2) % 3)];
        g.bx[static_cast<std::size_t>(k)] = (pn[1] - pp[1]) / det;
        g.by[static_cast<std::size_t>(k)] = (pp[0] - pn[0]) / det;
    }
    return g;
}

}  // namespace

SpMat assemble_weighted_stiffness_full(const Mesh& mesh, const ScalarField& weight) {
    const int nn = mesh.num_nodes();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriGeom g = tri_geometry(mesh, t);
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        // edge-midpoint rule, degree 2: weights area/3 at the three midpoints
        double wsum = 0.0;
        for (int e = 0; e < 3; ++e) {
            const auto& pa = g.p[static_cast<std::size_t>(e)];
            const auto& pb = g.p[static_cast<std::size_t>((e + 1) % 3)];
            wsum += weight(0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]));
        }
        const double coeff = wsum * g.area / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tri[i], tri[j],
                                   coeff * (g.bx[static_cast<std::size_t>(i)] * g.bx[static_cast<std::size_t>(j)] +
                                            g.by[static_cast<std::size_t>(i)] * g.by[static_cast<std::size_t>(j)]));
    }
    SpMat full(nn, nn);
    full.setFromTriplets(trips.begin(), trips.end());
    return full;
}

OperatorMatrix assemble_weighted_stiffness(const Mesh& mesh, const ScalarField& weight) {
    OperatorMatrix op;
    op.mat = restrict_interior(mesh, assemble_weighted_stiffness_full(mesh, weight));
    op.symmetric = true;
    return op;
}

SpMat assemble_directional_convection_full(const Mesh& mesh, Axis axis) {
    const int nn = mesh.num_nodes();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriGeom g = tri_geometry(mesh, t);
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& grad = (axis == Axis::X) ? g.bx : g.by;
        // int_T (d phi_j/d axis) phi_i = grad_j * area/3, exact (degree-1 integrand)
        const double third = g.area / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tri[i], tri[j], grad[static_cast<std::size_t>(j)] * third);
    }
    SpMat full(nn, nn);
    full.setFromTriplets(trips.begin(), trips.end());
    return full;
}

OperatorMatrix assemble_directional_convection(const Mesh& mesh, Axis axis) {
    OperatorMatrix op;
    op.mat = restrict_interior(mesh, assemble_directional_convection_full(mesh, axis));
    op.symmetric = false;
    return op;
}

Vector assemble_load_full(const Mesh& mesh, double constant) {
    Vector f = Vector::Zero(mesh.num_nodes());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double third = mesh.triangle_area(t) / 3.0;
        for (int k = 0; k < 3; ++k) f[mesh.triangles[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]] += constant * third;
    }
    return f;
}

Vector assemble_load(const Mesh& mesh, double constant) {
    return restrict_interior(mesh, assemble_load_full(mesh, constant));
}

SpMat restrict_interior(const Mesh& mesh, const SpMat& full) {
    const int ni = mesh.num_interior();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(full.nonZeros()));
    for (int k = 0; k < full.outerSize(); ++k) {
        for (SpMat::InnerIterator it(full, k); it; ++it) {
            const int ri = mesh.interior_dof_map[static_cast<std::size_t>(it.row())];
            const int ci = mesh.interior_dof_map[static_cast<std::size_t>(it.col())];
            if (ri >= 0 && ci >= 0) trips.emplace_back(ri, ci, it.value());
        }
    }
    SpMat out(ni, ni);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Vector restrict_interior(const Mesh& mesh, const Vector& full) {
    Vector out(mesh.num_interior());
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const int d = mesh.interior_dof_map[static_cast<std::size_t>(i)];
        if (d >= 0) out[d] = full[i];
    }
    return out;
}

}  // namespace rbhp
