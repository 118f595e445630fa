#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rbhp/affine_problem.hpp"

namespace rbhp {

using Matrix = Eigen::MatrixXd;

/// Reduced-basis space over an affine problem: X-orthonormal basis Z,
/// Galerkin-projected operators, and the Riesz-representer Gram blocks that
/// make the online residual norm an O(N^2 Q^2) evaluation.
///
/// Gram block layout: representer (q, i) for basis vector i and affine term
/// q maps to flat index i*Qa + q, so extending the basis appends rows and
/// columns and a basis prefix is a leading sub-block.
class RBSpace {
public:
    RBSpace() = default;

    /// Empty space; computes the load representers and G_ff (the residual
    /// data for N = 0) when the problem carries truth operators.
    static RBSpace create_empty(const AffineProblem& problem);

    /// Online-only reconstruction from serialized blocks.
    static RBSpace from_online_data(int q_a, int q_f, std::vector<Matrix> reduced_A, std::vector<Vector> reduced_F,
                                    Matrix g_ff, Matrix g_fa, Matrix g_aa);

    int size() const { return n_; }
    int q_a() const { return qa_; }
    int q_f() const { return qf_; }
    bool has_truth_data() const { return basis_.cols() == n_ && basis_.rows() > 0; }

    const Matrix& basis() const { return basis_; }
    const std::vector<Param>& selected_params() const { return selected_; }
    const std::vector<Matrix>& reduced_A() const { return reduced_A_; }
    const std::vector<Vector>& reduced_F() const { return reduced_F_; }
    const Matrix& g_ff() const { return g_ff_; }
    const Matrix& g_fa() const { return g_fa_; }
    const Matrix& g_aa() const { return g_aa_; }

    /// X-orthonormalizes the snapshot against the basis and, if independent,
    /// appends it and extends all reduced operators and Gram blocks (Qa
    /// Riesz solves). Returns false when the snapshot is dropped as
    /// dependent (post-orthogonalization X-norm < 1e-10 of original).
    bool extend(const AffineProblem& problem, const Vector& snapshot, const Param& mu = {});

    /// Leading m-dimensional sub-space (nested greedy prefix).
    RBSpace prefix(int m) const;

    /// max |Z^T X Z - I|.
    double orthonormality_defect(const AffineProblem& problem) const;

    /// Dense reduced Galerkin solve at mu (pivoted LU; throws SolveFailure
    /// when the condition estimate exceeds 1e14).
    Vector solve(const AffineProblem& problem, const Param& mu) const;

    /// ||R_N(mu)||_V from the Gram blocks; independent of the truth
    /// dimension. Throws when the squared value is below -1e-8.
    double residual_norm(const AffineProblem& problem, const Param& mu, const Vector& coeffs) const;

    /// eta_N(mu) = ||R_N(mu)||_V / alpha_lb(mu).
    double estimate_error(const AffineProblem& problem, const Param& mu) const;

    /// Truth reconstruction Z * coeffs (requires truth data).
    Vector reconstruct(const Vector& coeffs) const;

private:
    int n_ = 0;
    int qa_ = 0, qf_ = 0;
    Matrix basis_;                  // truth_dim x n (offline only)
    std::vector<Param> selected_;   // greedy-selected parameters
    std::vector<Matrix> reduced_A_; // Qa of n x n
    std::vector<Vector> reduced_F_; // Qf of n
    Matrix g_ff_;                   // Qf x Qf
    Matrix g_fa_;                   // Qf x (n Qa)
    Matrix g_aa_;                   // (n Qa) x (n Qa)
    // offline scratch for incremental extension
    Matrix op_basis_;               // columns A_q xi_i (truth_dim x n Qa)
    Matrix riesz_op_basis_;         // X^{-1} A_q xi_i
    Matrix riesz_f_;                // X^{-1} F_q (truth_dim x Qf)
};

/// Modified Gram-Schmidt in the X-inner product with a re-orthogonalization
/// sweep. Returns the kept basis and the indices of retained snapshots.
std::pair<Matrix, std::vector<std::size_t>> orthonormalize(const std::vector<Vector>& snapshots,
                                                           const OperatorMatrix& X);

/// Projects a given X-orthonormal basis onto the problem (Qf + Qa*n Riesz
/// solves), producing a fully populated RBSpace.
RBSpace project_reduced(const AffineProblem& problem, const Matrix& basis);

/// Free-function forms of the online operations.
Vector rb_solve(const RBSpace& space, const AffineProblem& problem, const Param& mu);
double residual_norm(const RBSpace& space, const AffineProblem& problem, const Param& mu, const Vector& coeffs);
double error_estimator(const RBSpace& space, const AffineProblem& problem, const Param& mu);

/// ||u_truth(mu) - Z c(mu)||_X via one truth solve (validation oracle).
double true_error(const AffineProblem& problem, const RBSpace& space, const Param& mu);

}  // namespace rbhp
