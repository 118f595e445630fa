#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "rbhp/assembly.hpp"

using namespace rbhp;

namespace {
const ScalarField kUnitWeight = [](double, double) { return 1.0; };
}

TEST_CASE("unit-weight stiffness is symmetric positive definite on interior dofs") {
    const Mesh mesh = generate_unit_square_mesh(8);
    const OperatorMatrix x = assemble_weighted_stiffness(mesh, kUnitWeight);
    CHECK(x.symmetric);
    CHECK(x.symmetry_within(1e-12));
    CHECK(x.rows() == mesh.num_interior());

    const Eigen::MatrixXd dense = Eigen::MatrixXd(x.mat);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("full stiffness rows sum to zero (constants in the gradient kernel)") {
    const Mesh mesh = generate_unit_square_mesh(6);
    const SpMat full = assemble_weighted_stiffness_full(mesh, kUnitWeight);
    const Vector row_sums = full * Vector::Ones(mesh.num_nodes());
    CHECK(row_sums.cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("degree-2 quadrature matches a degree-5 oracle for the oscillatory weight") {
    const Mesh mesh = generate_unit_square_mesh(32);
    const double alpha = 0.105;
    const ScalarField psi1 = [alpha](double x, double y) {
        return (std::cos(2.0 * M_PI * x) + std::cos(2.0 * M_PI * y)) / (2.0 * alpha * M_PI * M_PI);
    };
    const SpMat ours = restrict_interior(mesh, assemble_weighted_stiffness_full(mesh, psi1));
    const SpMat ref = restrict_interior(mesh, oracles::assemble_weighted_stiffness_deg5(mesh, psi1));
    const double rel = (Eigen::MatrixXd(ours) - Eigen::MatrixXd(ref)).norm() / Eigen::MatrixXd(ref).norm();
    CHECK(rel <= 1e-3);
}

TEST_CASE("interior-restricted convection is skew-symmetric") {
    for (const bool square : {true, false}) {
        const Mesh mesh = square ? generate_unit_square_mesh(8) : generate_disk_mesh(1.0, 300);
        for (const Axis axis : {Axis::X, Axis::Y}) {
            const OperatorMatrix c = assemble_directional_convection(mesh, axis);
            const Eigen::MatrixXd dense = Eigen::MatrixXd(c.mat);
            const double defect = (dense + dense.transpose()).cwiseAbs().maxCoeff();
            const double scale = dense.cwiseAbs().maxCoeff();
            CHECK(defect <= 1e-12 * scale);
        }
    }
}

TEST_CASE("full convection columns over interior trial functions sum to zero") {
    const Mesh mesh = generate_unit_square_mesh(6);
    const SpMat full = assemble_directional_convection_full(mesh, Axis::X);
    const Vector col_sums = full.transpose() * Vector::Ones(mesh.num_nodes());
    // sum_i C_ij = integral of d(phi_j)/dx, zero for compactly supported phi_j
    for (int j = 0; j < mesh.num_nodes(); ++j) {
        if (!mesh.is_boundary(j)) CHECK(std::abs(col_sums[j]) <= 1e-14);
    }
}

TEST_CASE("convection entries on the 2-triangle square match hand-computed integrals") {
    Mesh mesh;
    mesh.nodes = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
    mesh.boundary_nodes = {0, 1, 2, 3};
    mesh.build_interior_map();

    const double s = 1.0 / 6.0;
    const double cx_expected[4][4] = {{-s, s, s, -s}, {-s, s, 0, 0}, {-s, s, s, -s}, {0, 0, s, -s}};
    const double cy_expected[4][4] = {{-s, -s, s, s}, {0, -s, s, 0}, {-s, -s, s, s}, {-s, 0, 0, s}};

    const Eigen::MatrixXd cx = Eigen::MatrixXd(assemble_directional_convection_full(mesh, Axis::X));
    const Eigen::MatrixXd cy = Eigen::MatrixXd(assemble_directional_convection_full(mesh, Axis::Y));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(cx(i, j) == doctest::Approx(cx_expected[i][j]).epsilon(1e-14));
            CHECK(cy(i, j) == doctest::Approx(cy_expected[i][j]).epsilon(1e-14));
        }
}

TEST_CASE("load vector: zero constant, partition of unity, disk volume") {
    const Mesh square = generate_unit_square_mesh(5);
    CHECK(assemble_load(square, 0.0).norm() == 0.0);
    CHECK(assemble_load_full(square, 3.0).sum() == doctest::Approx(3.0 * square.total_area()).epsilon(1e-13));

    const Mesh disk = generate_disk_mesh(std::sqrt(2.0), 3689);
    const double sum = assemble_load_full(disk, 10.0).sum();
    CHECK(std::abs(sum - 10.0 * 2.0 * M_PI) / (10.0 * 2.0 * M_PI) < 0.02);
}
