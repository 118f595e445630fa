// Test-only oracles: independent computation routes used to pin expected
// values. Nothing here may call into the code paths under test.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "rbhp/assembly.hpp"
#include "rbhp/mesh.hpp"
#include "rbhp/rb_space.hpp"

namespace oracles {

using rbhp::Matrix;
using rbhp::Mesh;
using rbhp::SpMat;
using rbhp::Vector;

// Truncated double-sine series for -Lap u = 1 on the unit square:
//   u(x,y) = sum_{m,n odd} 16 sin(m pi x) sin(n pi y) / (m n pi^4 (m^2+n^2)).
inline double poisson_square_series(double x, double y, int max_mode = 99) {
    double s = 0.0;
    const double pi = M_PI;
    for (int m = 1; m <= max_mode; m += 2)
        for (int n = 1; n <= max_mode; n += 2)
            s += 16.0 * std::sin(m * pi * x) * std::sin(n * pi * y) /
                 (static_cast<double>(m) * n * pi * pi * pi * pi * (static_cast<double>(m) * m + static_cast<double>(n) * n));
    return s;
}

// Frozen value of the series at the center (m,n <= 99).
constexpr double kPoissonSquareCenter = 0.0736712245578999;

// Radial solution of -Lap u = c on the disk of radius R: u(r) = c (R^2 - r^2) / 4.
inline double poisson_disk_radial(double c, double radius, double r) {
    return c * (radius * radius - r * r) / 4.0;
}

// 7-point degree-5 triangle rule (Radon), used as the quadrature oracle for
// the degree-2 production rule.
inline rbhp::SpMat assemble_weighted_stiffness_deg5(const Mesh& mesh, const rbhp::ScalarField& weight) {
    static const double w0 = 0.225;
    static const double wa = 0.132394152788506;
    static const double wb = 0.125939180544827;
    static const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    static const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double bary[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                               {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
    const double wts[7] = {w0, wa, wa, wa, wb, wb, wb};

    std::vector<Eigen::Triplet<double>> trips;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const auto& p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const auto& p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
        const double area = 0.5 * det;
        double bx[3], by[3];
        const double px[3] = {p0[0], p1[0], p2[0]}, py[3] = {p0[1], p1[1], p2[1]};
        for (int k = 0; k < 3; ++k) {
            bx[k] = (py[(k + 1) % 3] - py[(k + 2) % 3]) / det;
            by[k] = (px[(k + 2) % 3] - px[(k + 1) % 3]) / det;
        }
        double wsum = 0.0;
        for (int q = 0; q < 7; ++q) {
            const double x = bary[q][0] * px[0] + bary[q][1] * px[1] + bary[q][2] * px[2];
            const double y = bary[q][0] * py[0] + bary[q][1] * py[1] + bary[q][2] * py[2];
            wsum += wts[q] * weight(x, y);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tri[i], tri[j], wsum * area * (bx[i] * bx[j] + by[i] * by[j]));
    }
    rbhp::SpMat full(mesh.num_nodes(), mesh.num_nodes());
    full.setFromTriplets(trips.begin(), trips.end());
    return full;
}

// Exact P1 mass matrix (area/6 diagonal, area/12 off-diagonal per element);
// test-only, used for the Poincare-constant cross-check.
inline rbhp::SpMat assemble_mass_full(const Mesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const double area = mesh.triangle_area(t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trips.emplace_back(tri[i], tri[j], area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
    }
    rbhp::SpMat full(mesh.num_nodes(), mesh.num_nodes());
    full.setFromTriplets(trips.begin(), trips.end());
    return full;
}

// Direct-assembly residual Riesz norm: r = F(mu) - A(mu) Z c, X R = r,
// ||R||_X = sqrt(r . R). The independent side of the offline/online identity.
inline double direct_residual_norm(const rbhp::AffineProblem& problem, const Matrix& basis, const rbhp::Param& mu,
                                   const Vector& coeffs) {
    const auto theta = rbhp::theta_eval(problem, mu);
    Vector r = theta.second[0] * problem.F_terms[0];
    for (std::size_t q = 1; q < theta.second.size(); ++q) r += theta.second[q] * problem.F_terms[q];
    if (coeffs.size() > 0) {
        const Vector u = basis * coeffs;
        for (std::size_t q = 0; q < theta.first.size(); ++q) r -= theta.first[q] * (problem.A_terms[q].mat * u);
    }
    const Vector rep = problem.riesz_solver().solve(r);
    return std::sqrt(std::max(0.0, r.dot(rep)));
}

}  // namespace oracles
