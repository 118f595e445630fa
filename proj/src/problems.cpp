#include "rbhp/problems.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rbhp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBesselJ0Root1 = 2.404825557695773;  // j_{0,1}
constexpr double kDefaultAlpha = 0.105;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ParsedDescriptor {
    std::string name;
    std::map<std::string, double> values;
};

ParsedDescriptor parse_descriptor(const std::string& descriptor) {
    ParsedDescriptor out;
    std::stringstream ss(descriptor);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad descriptor item: " + item);
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "problem")
            out.name = val;
        else
            out.values[key] = std::strtod(val.c_str(), nullptr);
    }
    if (out.name.empty()) throw std::invalid_argument("descriptor has no problem name: " + descriptor);
    return out;
}

void install_diffusion_functions(AffineProblem& p, double alpha) {
    const double c1 = 1.0 / (alpha * kPi * kPi);  // sup |mu1 psi1| per unit |mu1|
    const double c2 = 1.0 / (4.0 * kPi * kPi);
    // worst case on the closed domain is |mu1| = |mu2| = 1
    if (1.0 - c1 - c2 <= 0.0)
        throw std::invalid_argument("build_diffusion_problem: alpha too small, coefficient bound non-positive");

    p.domain = ParamBox({-1.0, -1.0}, {1.0, 1.0});
    p.q_a = 3;
    p.q_f = 1;
    p.theta_a = [](const Param& mu) { return std::vector<double>{1.0, mu[0], mu[1]}; };
    p.theta_f = [](const Param&) { return std::vector<double>{1.0}; };
    p.alpha_lb = [c1, c2](const Param& mu) { return 1.0 - c1 * std::abs(mu[0]) - c2 * std::abs(mu[1]); };
    p.gamma_ub = [c1, c2](const Param& mu) { return 1.0 + c1 * std::abs(mu[0]) + c2 * std::abs(mu[1]); };
    p.descriptor = "problem=diffusion;alpha=" + format_double(alpha);
}

ParamBox convdiff_domain(ConvDiffCase which) {
    switch (which) {
        case ConvDiffCase::I:
            return ParamBox({0.0, 0.0}, {0.0, 10.0}, {{0, 0.0}});
        case ConvDiffCase::II:
            return ParamBox({0.0, 10.0}, {kPi, 10.0}, {{1, 10.0}});
        case ConvDiffCase::III:
            return ParamBox({0.0, 0.0}, {kPi, 10.0});
    }
    throw std::logic_error("unreachable");
}

const char* convdiff_case_name(ConvDiffCase which) {
    switch (which) {
        case ConvDiffCase::I: return "convdiff-I";
        case ConvDiffCase::II: return "convdiff-II";
        case ConvDiffCase::III: return "convdiff-III";
    }
    throw std::logic_error("unreachable");
}

void install_convdiff_functions(AffineProblem& p, ConvDiffCase which, double radius) {
    const double poincare = radius / kBesselJ0Root1;
    p.domain = convdiff_domain(which);
    p.q_a = 3;
    p.q_f = 1;
    p.theta_a = [](const Param& mu) {
        return std::vector<double>{1.0, mu[1] * std::cos(mu[0]), mu[1] * std::sin(mu[0])};
    };
    p.theta_f = [](const Param&) { return std::vector<double>{1.0}; };
    p.alpha_lb = [](const Param&) { return 1.0; };
    p.gamma_ub = [poincare](const Param& mu) { return 1.0 + poincare * mu[1]; };
    p.descriptor = std::string("problem=") + convdiff_case_name(which) + ";radius=" + format_double(radius);
}

double mesh_radius(const Mesh& mesh) {
    double r = 0.0;
    for (int node : mesh.boundary_nodes) {
        const auto& q = mesh.nodes[static_cast<std::size_t>(node)];
        r = std::max(r, std::hypot(q[0], q[1]));
    }
    return r;
}

}  // namespace

AffineProblem build_diffusion_problem(std::shared_ptr<const Mesh> mesh, double alpha) {
    AffineProblem p;
    install_diffusion_functions(p, alpha);

    const double inv_2api2 = 1.0 / (2.0 * alpha * kPi * kPi);
    const double inv_8pi2 = 1.0 / (8.0 * kPi * kPi);
    const auto psi1 = [inv_2api2](double x, double y) {
        return (std::cos(2.0 * kPi * x) + std::cos(2.0 * kPi * y)) * inv_2api2;
    };
    const auto psi2 = [inv_8pi2](double x, double y) {
        return (std::cos(4.0 * kPi * x) + std::cos(4.0 * kPi * y)) * inv_8pi2;
    };

    p.mesh = mesh;
    p.X = assemble_weighted_stiffness(*mesh, [](double, double) { return 1.0; });
    p.A_terms = {p.X, assemble_weighted_stiffness(*mesh, psi1), assemble_weighted_stiffness(*mesh, psi2)};
    p.F_terms = {assemble_load(*mesh, 1.0)};
    p.x_solver = std::make_shared<SparseSolver>(p.X);
    return p;
}

AffineProblem build_convdiff_problem(std::shared_ptr<const Mesh> mesh, ConvDiffCase which) {
    const double radius = mesh_radius(*mesh);
    for (int node : mesh->boundary_nodes) {
        const auto& q = mesh->nodes[static_cast<std::size_t>(node)];
        if (std::abs(std::hypot(q[0], q[1]) - radius) > 1e-9)
            throw std::invalid_argument("build_convdiff_problem: boundary nodes not on a circle");
    }

    AffineProblem p;
    install_convdiff_functions(p, which, radius);
    p.mesh = mesh;
    p.X = assemble_weighted_stiffness(*mesh, [](double, double) { return 1.0; });
    p.A_terms = {p.X, assemble_directional_convection(*mesh, Axis::X), assemble_directional_convection(*mesh, Axis::Y)};
    p.F_terms = {assemble_load(*mesh, 10.0)};
    p.x_solver = std::make_shared<SparseSolver>(p.X);
    return p;
}

AffineProblem build_named_problem(const std::string& name, const MeshParams& mesh_params, double alpha) {
    if (name == "diffusion") {
        const int n = mesh_params.square_n > 0 ? mesh_params.square_n : 44;
        auto mesh = std::make_shared<const Mesh>(generate_unit_square_mesh(n));
        return build_diffusion_problem(mesh, alpha > 0.0 ? alpha : kDefaultAlpha);
    }
    ConvDiffCase which;
    if (name == "convdiff-I")
        which = ConvDiffCase::I;
    else if (name == "convdiff-II")
        which = ConvDiffCase::II;
    else if (name == "convdiff-III")
        which = ConvDiffCase::III;
    else
        throw std::invalid_argument("unknown problem name: " + name);
    const int target = mesh_params.disk_target > 0 ? mesh_params.disk_target : 3689;
    auto mesh = std::make_shared<const Mesh>(generate_disk_mesh(std::sqrt(2.0), target));
    return build_convdiff_problem(mesh, which);
}

AffineProblem make_online_problem(const std::string& descriptor) {
    const ParsedDescriptor d = parse_descriptor(descriptor);
    AffineProblem p;
    if (d.name == "diffusion") {
        const auto it = d.values.find("alpha");
        install_diffusion_functions(p, it != d.values.end() ? it->second : kDefaultAlpha);
    } else {
        ConvDiffCase which;
        if (d.name == "convdiff-I")
            which = ConvDiffCase::I;
        else if (d.name == "convdiff-II")
            which = ConvDiffCase::II;
        else if (d.name == "convdiff-III")
            which = ConvDiffCase::III;
        else
            throw std::invalid_argument("unknown problem in descriptor: " + d.name);
        const auto it = d.values.find("radius");
        install_convdiff_functions(p, which, it != d.values.end() ? it->second : std::sqrt(2.0));
    }
    return p;
}

}  // namespace rbhp
