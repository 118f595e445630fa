#pragma once

#include <string>

#include "rbhp/affine_problem.hpp"

namespace rbhp {

/// Diffusion on the unit square, D = [-1,1]^2, f = 1:
///   a(x;mu) = 1 + mu1 (cos 2pi x + cos 2pi y)/(2 alpha pi^2)
///               + mu2 (cos 4pi x + cos 4pi y)/(8 pi^2)
/// Rejects alpha values for which the coefficient lower bound
///   alpha_lb(mu) = 1 - |mu1|/(alpha pi^2) - |mu2|/(4 pi^2)
/// is non-positive somewhere on the closed domain.
AffineProblem build_diffusion_problem(std::shared_ptr<const Mesh> mesh, double alpha);

enum class ConvDiffCase { I, II, III };

/// Convection-diffusion on the disk of radius sqrt(2), f = 10, velocity
/// (mu2 cos mu1, mu2 sin mu1). Cases freeze one coordinate:
///   I: {0} x [0,10],  II: [0,pi] x {10},  III: [0,pi] x [0,10].
/// alpha_lb = 1 (skew-symmetric convection in the H^1_0 seminorm);
/// gamma_ub = 1 + C_P mu2 with C_P = radius / j_{0,1}.
AffineProblem build_convdiff_problem(std::shared_ptr<const Mesh> mesh, ConvDiffCase which);

/// Mesh resolution knobs for the named builders; zero means the built-in
/// default (n=44 for the square, 3689 target triangles for the disk).
struct MeshParams {
    int square_n = 0;
    int disk_target = 0;
};

/// Selection by name: "diffusion", "convdiff-I", "convdiff-II",
/// "convdiff-III". alpha applies to the diffusion problem only (0 = default
/// 0.105).
AffineProblem build_named_problem(const std::string& name, const MeshParams& mesh_params = {}, double alpha = 0.0);

/// Rebuilds the parameter-side of a problem (domain, thetas, bounds) from a
/// descriptor string, without any truth-space operators. Used when loading
/// a library for online evaluation.
AffineProblem make_online_problem(const std::string& descriptor);

}  // namespace rbhp
