#include "rbhp/affine_problem.hpp"

#include <stdexcept>

namespace rbhp {

const SparseSolver& AffineProblem::riesz_solver() const {
    if (!x_solver) throw std::logic_error("AffineProblem: no X factorization (online-only instance?)");
    return *x_solver;
}

std::pair<std::vector<double>, std::vector<double>> theta_eval(const AffineProblem& problem, const Param& mu) {
    if (!problem.domain.contains(mu))
        throw std::domain_error("theta_eval: parameter outside domain " + to_string(mu));
    return {problem.theta_a(mu), problem.theta_f(mu)};
}

OperatorMatrix assemble_parametric_operator(const AffineProblem& problem, const std::vector<double>& theta) {
    if (theta.size() != problem.A_terms.size()) throw std::invalid_argument("assemble_parametric_operator: theta arity");
    OperatorMatrix op;
    op.mat = theta[0] * problem.A_terms[0].mat;
    op.symmetric = problem.A_terms[0].symmetric;
    for (std::size_t q = 1; q < theta.size(); ++q) {
        op.mat += theta[q] * problem.A_terms[q].mat;
        op.symmetric = op.symmetric && (problem.A_terms[q].symmetric || theta[q] == 0.0);
    }
    return op;
}

Vector assemble_parametric_rhs(const AffineProblem& problem, const std::vector<double>& theta) {
    if (theta.size() != problem.F_terms.size()) throw std::invalid_argument("assemble_parametric_rhs: theta arity");
    Vector rhs = theta[0] * problem.F_terms[0];
    for (std::size_t q = 1; q < theta.size(); ++q) rhs += theta[q] * problem.F_terms[q];
    return rhs;
}

Vector truth_solve(const AffineProblem& problem, const Param& mu) {
    if (!problem.has_truth()) throw std::logic_error("truth_solve: online-only problem instance");
    auto [ta, tf] = theta_eval(problem, mu);
    const OperatorMatrix A = assemble_parametric_operator(problem, ta);
    const Vector rhs = assemble_parametric_rhs(problem, tf);
    return solve_sparse(A, rhs);
}

}  // namespace rbhp
