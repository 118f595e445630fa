#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <memory>
#include <stdexcept>

#include "rbhp/assembly.hpp"

namespace rbhp {

struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Direct sparse solver with a cached factorization: LLT for symmetric
/// operators, LU otherwise. Every solve is checked against the relative
/// residual target (one refinement step is attempted first).
class SparseSolver {
public:
    static constexpr double kResidualTol = 1e-10;

    explicit SparseSolver(const OperatorMatrix& op);

    Vector solve(const Vector& rhs) const;

    Eigen::Index size() const { return mat_.rows(); }

private:
    Vector solve_once(const Vector& rhs) const;
    Vector residual(const Vector& rhs, const Vector& x) const;

    SpMat mat_;
    bool symmetric_;
    std::unique_ptr<Eigen::SimplicialLLT<SpMat>> llt_;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

/// One-shot factor-and-solve with the residual contract of SparseSolver.
Vector solve_sparse(const OperatorMatrix& A, const Vector& rhs);

}  // namespace rbhp
