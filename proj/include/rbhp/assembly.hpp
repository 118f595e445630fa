#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "rbhp/mesh.hpp"

namespace rbhp {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Sparse operator over interior dofs, with a symmetry tag used by solver
/// selection and sanity checks.
struct OperatorMatrix {
    SpMat mat;
    bool symmetric = false;

    Eigen::Index rows() const { return mat.rows(); }
    Eigen::Index cols() const { return mat.cols(); }
    // max |A - A^T| <= tol * max |A|
    bool symmetry_within(double tol) const;
};

using ScalarField = std::function<double(double, double)>;

enum class Axis { X, Y };

/// Stiffness with a variable coefficient: entries int_Omega w grad(phi_j).grad(phi_i),
/// 3-point degree-2 Gauss per triangle (edge midpoints). Full matrix over all nodes.
SpMat assemble_weighted_stiffness_full(const Mesh& mesh, const ScalarField& weight);

/// Same, restricted to interior dofs. With weight ≡ 1 this is the V-inner
/// product matrix X.
OperatorMatrix assemble_weighted_stiffness(const Mesh& mesh, const ScalarField& weight);

/// Convection entries int_Omega (d phi_j / d axis) phi_i, exact for P1.
SpMat assemble_directional_convection_full(const Mesh& mesh, Axis axis);
OperatorMatrix assemble_directional_convection(const Mesh& mesh, Axis axis);

/// Load entries constant * int_Omega phi_i, exact for P1.
Vector assemble_load_full(const Mesh& mesh, double constant);
Vector assemble_load(const Mesh& mesh, double constant);

/// Drop boundary rows/columns of a full node-indexed matrix or vector.
SpMat restrict_interior(const Mesh& mesh, const SpMat& full);
Vector restrict_interior(const Mesh& mesh, const Vector& full);

}  // namespace rbhp
