#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "rbhp/problems.hpp"
#include "rbhp/rng.hpp"

using namespace rbhp;

namespace {

std::shared_ptr<const Mesh> square_mesh(int n) {
    return std::make_shared<const Mesh>(generate_unit_square_mesh(n));
}
std::shared_ptr<const Mesh> disk_mesh(int target) {
    return std::make_shared<const Mesh>(generate_disk_mesh(std::sqrt(2.0), target));
}

}  // namespace

TEST_CASE("diffusion problem: coercivity bounds and alpha rejection") {
    const AffineProblem p = build_diffusion_problem(square_mesh(8), 0.105);
    CHECK(p.q_a == 3);
    CHECK(p.q_f == 1);
    // analytic extrema: sup |cos 2pi x + cos 2pi y| = 2
    CHECK(p.alpha_lb({1.0, 1.0}) == doctest::Approx(0.009706050352865203).epsilon(1e-12));
    CHECK(p.alpha_lb({1.0, 1.0}) > 0.0);
    CHECK(p.alpha_lb({0.0, 0.0}) == 1.0);
    CHECK(p.gamma_ub({0.0, 0.0}) == 1.0);
    CHECK(p.alpha_lb({0.5, -0.5}) <= p.gamma_ub({0.5, -0.5}));

    CHECK_THROWS_AS(build_diffusion_problem(square_mesh(4), 0.05), std::invalid_argument);
}

TEST_CASE("theta_eval: values, domain rejection") {
    const AffineProblem diff = build_diffusion_problem(square_mesh(4), 0.105);
    const auto [ta, tf] = theta_eval(diff, {0.3, -0.7});
    CHECK(ta == std::vector<double>{1.0, 0.3, -0.7});
    CHECK(tf == std::vector<double>{1.0});
    CHECK_THROWS_AS(theta_eval(diff, {1.2, 0.0}), std::domain_error);

    const AffineProblem cd = build_convdiff_problem(disk_mesh(300), ConvDiffCase::III);
    const auto ta2 = theta_eval(cd, {0.0, 10.0}).first;
    CHECK(ta2[0] == 1.0);
    CHECK(ta2[1] == doctest::Approx(10.0));
    CHECK(std::abs(ta2[2]) <= 1e-12);
    const auto ta3 = theta_eval(cd, {M_PI / 2.0, 4.0}).first;
    CHECK(std::abs(ta3[1]) <= 1e-12 * 4.0);
    CHECK(ta3[2] == doctest::Approx(4.0));
}

TEST_CASE("theta_eval derivatives match finite differences") {
    const AffineProblem cd = build_convdiff_problem(disk_mesh(300), ConvDiffCase::III);
    Rng rng(5);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const double m1 = rng.uniform(0.1, M_PI - 0.1);
        const double m2 = rng.uniform(0.1, 9.9);
        // analytic Jacobian of (mu2 cos mu1, mu2 sin mu1)
        const double d_theta2[2] = {-m2 * std::sin(m1), std::cos(m1)};
        const double d_theta3[2] = {m2 * std::cos(m1), std::sin(m1)};
        for (int axis = 0; axis < 2; ++axis) {
            Param lo{m1, m2}, hi{m1, m2};
            lo[static_cast<std::size_t>(axis)] -= h;
            hi[static_cast<std::size_t>(axis)] += h;
            const auto t_lo = theta_eval(cd, lo).first;
            const auto t_hi = theta_eval(cd, hi).first;
            CHECK((t_hi[1] - t_lo[1]) / (2 * h) == doctest::Approx(d_theta2[axis]).epsilon(1e-6));
            CHECK((t_hi[2] - t_lo[2]) / (2 * h) == doctest::Approx(d_theta3[axis]).epsilon(1e-6));
        }
    }
}

TEST_CASE("convection-diffusion cases: domains and Poincare constant") {
    const auto mesh = disk_mesh(300);
    const AffineProblem p1 = build_convdiff_problem(mesh, ConvDiffCase::I);
    CHECK(p1.domain.effective_dim() == 1);
    CHECK(p1.domain.is_frozen(0));
    CHECK(p1.domain.lower()[1] == 0.0);
    CHECK(p1.domain.upper()[1] == 10.0);
    CHECK(p1.alpha_lb({0.0, 3.0}) == 1.0);

    // gamma_ub = 1 + C_P mu2 with C_P = sqrt(2)/j_{0,1}
    const double cp = 0.588073242089189;
    CHECK(p1.gamma_ub({0.0, 10.0}) == doctest::Approx(1.0 + 10.0 * cp).epsilon(1e-9));

    // cross-check C_P against the smallest Dirichlet eigenvalue of the FE
    // Laplacian: C_P_fe = 1/sqrt(lambda_min) <= C_P (conforming, polygon in disk)
    const SpMat mass = restrict_interior(*mesh, oracles::assemble_mass_full(*mesh));
    const Eigen::MatrixXd a = Eigen::MatrixXd(p1.X.mat);
    const Eigen::MatrixXd m = Eigen::MatrixXd(mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, m);
    const double cp_fe = 1.0 / std::sqrt(eig.eigenvalues().minCoeff());
    CHECK(cp_fe <= cp + 1e-12);
    CHECK(cp_fe == doctest::Approx(cp).epsilon(0.05));
}

TEST_CASE("truth solves match analytic oracles") {
    // diffusion at (0,0) reduces to -Lap u = 1
    const AffineProblem diff = build_diffusion_problem(square_mesh(32), 0.105);
    const Vector u1 = truth_solve(diff, {0.0, 0.0});
    int center = -1;
    for (int i = 0; i < diff.mesh->num_nodes(); ++i) {
        const auto& p = diff.mesh->nodes[static_cast<std::size_t>(i)];
        if (p[0] == 0.5 && p[1] == 0.5) center = diff.mesh->interior_dof_map[static_cast<std::size_t>(i)];
    }
    REQUIRE(center >= 0);
    CHECK(std::abs(u1[center] - oracles::kPoissonSquareCenter) / oracles::kPoissonSquareCenter < 0.01);

    // convection-diffusion at (0,0) reduces to -Lap u = 10 on the disk
    const AffineProblem cd = build_convdiff_problem(disk_mesh(2000), ConvDiffCase::III);
    const Vector u2 = truth_solve(cd, {0.0, 0.0});
    const int center_dof = cd.mesh->interior_dof_map[0];  // node 0 is the disk center
    REQUIRE(center_dof >= 0);
    const double exact = oracles::poisson_disk_radial(10.0, std::sqrt(2.0), 0.0);
    CHECK(std::abs(u2[center_dof] - exact) / exact < 0.02);

    // pure diffusion limit coincides with the Laplace system solve
    const Vector direct = solve_sparse(cd.X, cd.F_terms[0]);
    CHECK((u2 - direct).norm() <= 1e-10 * direct.norm());
}

TEST_CASE("truth solve satisfies the Lax-Milgram stability bound") {
    const AffineProblem diff = build_diffusion_problem(square_mesh(16), 0.105);
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const Param mu{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const Vector u = truth_solve(diff, mu);
        const double u_norm = std::sqrt(u.dot(diff.X.mat * u));
        const Vector rf = diff.riesz_solver().solve(diff.F_terms[0]);
        const double eta0 = std::sqrt(diff.F_terms[0].dot(rf));
        CHECK(u_norm <= eta0 / diff.alpha_lb(mu) * (1.0 + 1e-10));
    }
}

TEST_CASE("assembled operator is coercive against alpha_lb (sampled)") {
    const AffineProblem diff = build_diffusion_problem(square_mesh(8), 0.105);
    Rng rng(31);
    for (const Param mu : {Param{0.9, -0.8}, Param{-1.0, 1.0}, Param{0.2, 0.4}}) {
        const auto theta = theta_eval(diff, mu).first;
        const OperatorMatrix a_mu = assemble_parametric_operator(diff, theta);
        for (int trial = 0; trial < 100; ++trial) {
            Vector v(a_mu.rows());
            for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
            const double quad = v.dot(a_mu.mat * v);
            const double x_quad = v.dot(diff.X.mat * v);
            CHECK(quad >= diff.alpha_lb(mu) * x_quad * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("convection drops out of the quadratic form") {
    const AffineProblem cd = build_convdiff_problem(disk_mesh(300), ConvDiffCase::III);
    const auto theta = theta_eval(cd, {2.0, 7.5}).first;
    const OperatorMatrix a_mu = assemble_parametric_operator(cd, theta);
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(a_mu.rows());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
        const double quad = v.dot(a_mu.mat * v);
        const double stiff = v.dot(cd.A_terms[0].mat * v);
        CHECK(std::abs(quad - stiff) <= 1e-12 * std::abs(stiff));
    }
}

TEST_CASE("named problems and online descriptors round-trip") {
    const AffineProblem p = build_named_problem("convdiff-II", MeshParams{0, 300});
    const AffineProblem online = make_online_problem(p.descriptor);
    CHECK(online.domain == p.domain);
    CHECK(!online.has_truth());
    const Param mu{1.0, 10.0};
    CHECK(online.theta_a(mu) == p.theta_a(mu));
    CHECK(online.alpha_lb(mu) == p.alpha_lb(mu));
    CHECK(online.gamma_ub(mu) == p.gamma_ub(mu));

    CHECK_THROWS_AS(build_named_problem("unknown"), std::invalid_argument);
}

TEST_CASE("convection-diffusion builder validates the disk mesh") {
    auto square = std::make_shared<const Mesh>(generate_unit_square_mesh(4));
    CHECK_THROWS_AS(build_convdiff_problem(square, ConvDiffCase::III), std::invalid_argument);
}
