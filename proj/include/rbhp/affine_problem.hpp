#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rbhp/assembly.hpp"
#include "rbhp/mesh.hpp"
#include "rbhp/param_box.hpp"
#include "rbhp/sparse_solver.hpp"

namespace rbhp {

using ThetaFn = std::function<std::vector<double>(const Param&)>;
using BoundFn = std::function<double(const Param&)>;

/// Affine parametric problem
///   a(w,v;mu) = sum_q theta_a^q(mu) a_q(w,v),   f(v;mu) = sum_q theta_f^q(mu) f_q(v)
/// together with the V-inner-product operator X and coercivity/continuity
/// bound functions. The operator part (A_terms, F_terms, X) is absent for
/// online-only instances reconstructed from a library descriptor.
struct AffineProblem {
    std::string descriptor;  // "problem=...;key=value;..." round-trippable
    ParamBox domain;

    ThetaFn theta_a;
    ThetaFn theta_f;
    BoundFn alpha_lb;
    BoundFn gamma_ub;
    int q_a = 0;
    int q_f = 0;

    // truth-space data (empty when online-only)
    std::vector<OperatorMatrix> A_terms;
    std::vector<Vector> F_terms;
    OperatorMatrix X;
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<SparseSolver> x_solver;  // X factored once per problem

    bool has_truth() const { return !A_terms.empty(); }
    Eigen::Index truth_dim() const { return has_truth() ? X.mat.rows() : 0; }

    const SparseSolver& riesz_solver() const;
};

/// Evaluates (theta_a(mu), theta_f(mu)); throws std::domain_error when mu
/// lies outside the closed parameter domain.
std::pair<std::vector<double>, std::vector<double>> theta_eval(const AffineProblem& problem, const Param& mu);

/// Assembles sum theta_a^q A_q and solves against sum theta_f^q F_q to the
/// 1e-10 relative-residual contract.
Vector truth_solve(const AffineProblem& problem, const Param& mu);

/// sum theta_a^q A_q as one sparse operator.
OperatorMatrix assemble_parametric_operator(const AffineProblem& problem, const std::vector<double>& theta);
Vector assemble_parametric_rhs(const AffineProblem& problem, const std::vector<double>& theta);

}  // namespace rbhp
