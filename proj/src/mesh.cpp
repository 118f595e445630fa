#include "rbhp/mesh.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rbhp {

double Mesh::triangle_area(int t) const {
    const auto& tri = triangles[static_cast<std::size_t>(t)];
    const auto& a = nodes[static_cast<std::size_t>(tri[0])];
    const auto& b = nodes[static_cast<std::size_t>(tri[1])];
    const auto& c = nodes[static_cast<std::size_t>(tri[2])];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < num_triangles(); ++t) sum += triangle_area(t);
    return sum;
}

void Mesh::build_interior_map() {
    interior_dof_map.assign(nodes.size(), -1);
    int next = 0;
    for (int i = 0; i < num_nodes(); ++i) {
        if (!is_boundary(i)) interior_dof_map[static_cast<std::size_t>(i)] = next++;
    }
    n_interior_ = next;
}

Mesh generate_unit_square_mesh(int n_per_side) {
    if (n_per_side < 1) throw std::invalid_argument("generate_unit_square_mesh: n_per_side must be >= 1");
    const int n = n_per_side;
    const double h = 1.0 / n;
    Mesh mesh;
    mesh.nodes.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.nodes.push_back({i * h, j * h});
            if (i == 0 || i == n || j == 0 || j == n) {
                mesh.boundary_nodes.insert(j * (n + 1) + i);
            }
        }
    }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = id(i, j), v10 = id(i + 1, j);
            const int v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    mesh.build_interior_map();
    return mesh;
}

namespace {

// Pick ring count M and per-ring node factor c so that the triangle count
// c*M^2 is as close to the target as possible; among ties prefer c near 6
// (isotropic triangles), then fewer rings.
void choose_disk_params(int target, int& c_out, int& m_out) {
    long best_err = std::numeric_limits<long>::max();
    int best_c = 6, best_m = 1;
    for (int c = 3; c <= 12; ++c) {
        for (int m = 1; static_cast<long>(c) * m * m <= 4L * target + c; ++m) {
            const long count = static_cast<long>(c) * m * m;
            const long err = std::abs(count - target);
            const bool better =
                err < best_err ||
                (err == best_err && std::abs(c - 6) < std::abs(best_c - 6)) ||
                (err == best_err && std::abs(c - 6) == std::abs(best_c - 6) && m < best_m);
            if (better) {
                best_err = err;
                best_c = c;
                best_m = m;
            }
        }
    }
    c_out = best_c;
    m_out = best_m;
}

}  // namespace

Mesh generate_disk_mesh(double radius, int target_triangles) {
    if (radius <= 0.0) throw std::invalid_argument("generate_disk_mesh: radius must be positive");
    if (target_triangles < 8) throw std::invalid_argument("generate_disk_mesh: target_triangles must be >= 8");

    int c = 0, rings = 0;
    choose_disk_params(target_triangles, c, rings);
    const long count = static_cast<long>(c) * rings * rings;
    if (std::abs(count - target_triangles) > 0.15 * target_triangles) {
        throw std::invalid_argument("generate_disk_mesh: no ring layout within 15% of target");
    }

    Mesh mesh;
    mesh.nodes.push_back({0.0, 0.0});
    std::vector<int> ring_start(static_cast<std::size_t>(rings) + 1, 0);
    for (int k = 1; k <= rings; ++k) {
        ring_start[static_cast<std::size_t>(k)] = mesh.num_nodes();
        const int nk = c * k;
        const double r = radius * k / rings;
        for (int i = 0; i < nk; ++i) {
            const double th = 2.0 * M_PI * i / nk;
            mesh.nodes.push_back({r * std::cos(th), r * std::sin(th)});
            if (k == rings) mesh.boundary_nodes.insert(mesh.num_nodes() - 1);
        }
    }

    // center fan
    for (int i = 0; i < c; ++i) {
        mesh.triangles.push_back({0, ring_start[1] + i, ring_start[1] + (i + 1) % c});
    }
    // bands: merge ring k (inner, c*k nodes) with ring k+1 by angle sweep
    for (int k = 1; k < rings; ++k) {
        const int na = c * k, nb = c * (k + 1);
        const int sa = ring_start[static_cast<std::size_t>(k)];
        const int sb = ring_start[static_cast<std::size_t>(k + 1)];
        auto ang_a = [na](int i) { return 2.0 * M_PI * i / na; };
        auto ang_b = [nb](int j) { return 2.0 * M_PI * j / nb; };
        int i = 0, j = 0;
        while (i < na || j < nb) {
            const bool advance_inner = (j == nb) || (i < na && ang_a(i + 1) <= ang_b(j + 1));
            if (advance_inner) {
                mesh.triangles.push_back({sa + i, sb + j % nb, sa + (i + 1) % na});
                ++i;
            } else {
                mesh.triangles.push_back({sb + j, sb + (j + 1) % nb, sa + i % na});
                ++j;
            }
        }
    }

    mesh.build_interior_map();
    return mesh;
}

void export_mesh(const Mesh& mesh, std::ostream& out) {
    out.precision(17);
    for (const auto& p : mesh.nodes) out << p[0] << ' ' << p[1] << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void export_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("export_mesh: cannot open " + path);
    export_mesh(mesh, f);
}

}  // namespace rbhp
