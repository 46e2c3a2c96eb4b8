#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/quadrature.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/generators.hpp"
#include "bubblelab/geometry/mesh.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bubblelab {

namespace detail {

struct QuadPoints {
    std::vector<double> x, y, z;    // positions
    std::vector<double> w;          // area weights
    std::vector<double> nx, ny, nz; // w * normal
    std::vector<int> owner;         // triangle index

    void push(const Vec3& p, double weight, const Vec3& n, int tri) {
        x.push_back(p.x());
        y.push_back(p.y());
        z.push_back(p.z());
        w.push_back(weight);
        nx.push_back(weight * n.x());
        ny.push_back(weight * n.y());
        nz.push_back(weight * n.z());
        owner.push_back(tri);
    }
    std::size_t size() const noexcept { return w.size(); }
};

inline void subdivide(const geom::Triangle& t, int levels, std::vector<geom::Triangle>& out) {
    if (levels == 0) {
        out.push_back(t);
        return;
    }
    const Vec3 ab = 0.5 * (t.a + t.b), bc = 0.5 * (t.b + t.c), ca = 0.5 * (t.c + t.a);
    subdivide({t.a, ab, ca}, levels - 1, out);
    subdivide({ab, t.b, bc}, levels - 1, out);
    subdivide({ca, bc, t.c}, levels - 1, out);
    subdivide({ab, bc, ca}, levels - 1, out);
}

inline void add_rule(QuadPoints& q, const geom::Triangle& t, const Vec3& normal, const quad::TriangleRule& rule, int tri) {
    const double area = t.area();
    for (std::size_t k = 0; k < rule.weights.size(); ++k) q.push(t.point(rule.bary[k]), area * rule.weights[k], normal, tri);
}

/// sum_{i in xs, j in ys} w_i ((x_i - y_j) . n_j w_j) / |x_i - y_j|, coincident points skipped.
inline double kernel_block(const QuadPoints& xs, std::size_t x0, std::size_t x1, const QuadPoints& ys, std::size_t y0,
                           std::size_t y1) {
    double total = 0.0;
    for (std::size_t i = x0; i < x1; ++i) {
        const double px = xs.x[i], py = xs.y[i], pz = xs.z[i];
        double acc = 0.0;
        for (std::size_t j = y0; j < y1; ++j) {
            const double dx = px - ys.x[j], dy = py - ys.y[j], dz = pz - ys.z[j];
            const double r2 = dx * dx + dy * dy + dz * dz;
            const double num = dx * ys.nx[j] + dy * ys.ny[j] + dz * ys.nz[j];
            acc += r2 > 0.0 ? num / std::sqrt(r2) : 0.0;
        }
        total += xs.w[i] * acc;
    }
    return total;
}

} // namespace detail

struct HatAOptions {
    int quad_order = 2;          // triangle rule degree on regular pairs
    int subdivision_levels = 1;  // 4^levels children per triangle on near/self pairs
    double near_factor = 2.0;    // pair is near if centroid distance < factor * max diameter
};

/// (1/|dB|) int_dB int_dB ((x-y)/|x-y|) . nu(y) ds(y) ds(x) by panel quadrature.
/// The integrand is bounded, so near and self pairs only need subdivision.
inline double compute_hat_A(const geom::SurfaceMesh& mesh, const HatAOptions& opt = {}) {
    mesh.require_closed_outward();
    require(opt.quad_order >= 1 && opt.subdivision_levels >= 0, ErrorKind::numeric, "bad hat-A quadrature options");

    std::vector<geom::Triangle> tris;
    std::vector<Vec3> normals;
    for (std::size_t p = 0; p < mesh.size(); ++p)
        for (const auto& t : mesh.triangles(p)) {
            tris.push_back(t);
            normals.push_back(mesh[p].normal);
        }
    const auto& rule = quad::triangle_rule(opt.quad_order);
    detail::QuadPoints coarse;
    std::vector<std::size_t> start{0};
    for (std::size_t t = 0; t < tris.size(); ++t) {
        detail::add_rule(coarse, tris[t], normals[t], rule, static_cast<int>(t));
        start.push_back(coarse.size());
    }

    // Children used on near pairs, built lazily.
    std::vector<detail::QuadPoints> fine(tris.size());
    std::vector<bool> has_fine(tris.size(), false);
    auto fine_of = [&](std::size_t t) -> const detail::QuadPoints& {
        if (!has_fine[t]) {
            std::vector<geom::Triangle> kids;
            detail::subdivide(tris[t], opt.subdivision_levels, kids);
            for (const auto& k : kids) detail::add_rule(fine[t], k, normals[t], rule, static_cast<int>(t));
            has_fine[t] = true;
        }
        return fine[t];
    };

    std::vector<double> row(tris.size());
    for (std::size_t tx = 0; tx < tris.size(); ++tx) {
        double s = detail::kernel_block(coarse, start[tx], start[tx + 1], coarse, 0, coarse.size());
        const Vec3 cx = tris[tx].centroid();
        const double dx = tris[tx].diameter();
        for (std::size_t ty = 0; ty < tris.size(); ++ty) {
            const double d = std::max(dx, tris[ty].diameter());
            if ((tris[ty].centroid() - cx).norm() >= opt.near_factor * d) continue;
            s -= detail::kernel_block(coarse, start[tx], start[tx + 1], coarse, start[ty], start[ty + 1]);
            const auto& fx = fine_of(tx);
            const auto& fy = fine_of(ty);
            s += detail::kernel_block(fx, 0, fx.size(), fy, 0, fy.size());
        }
        row[tx] = s;
    }
    const double value = pairwise_sum(row) / mesh.total_area();
    require(std::isfinite(value), ErrorKind::numeric, "hat-A quadrature produced a non-finite value");
    return value;
}

enum class ShapeId { sphere, cube, mesh };

constexpr std::string_view to_string(ShapeId s) noexcept {
    switch (s) {
    case ShapeId::sphere: return "sphere";
    case ShapeId::cube: return "cube";
    case ShapeId::mesh: return "mesh";
    }
    return "mesh";
}

/// Reference bubble shape B (dimensionless) with its volume and hat-A integral.
struct BubbleSpec {
    ShapeId shape_id = ShapeId::sphere;
    geom::SurfaceMesh boundary_mesh;
    double volume_B = 0.0;
    std::optional<double> hat_A_ref;

    double hat_A() const {
        require(hat_A_ref.has_value(), ErrorKind::config, "bubble hat-A requested before it was computed");
        return *hat_A_ref;
    }

    BubbleSpec& compute_hat_A(const HatAOptions& opt = {}) {
        hat_A_ref = bubblelab::compute_hat_A(boundary_mesh, opt);
        validate();
        return *this;
    }

    void validate() const {
        require(volume_B > 0.0, ErrorKind::geometry, "bubble volume must be positive");
        boundary_mesh.require_closed_outward();
        if (hat_A_ref) require(*hat_A_ref < 0.0, ErrorKind::geometry, "bubble hat-A must be negative");
    }

    /// Unit sphere; the mesh is an icosphere, the volume is exact. With
    /// exact_hat_A the closed form -8 pi / 3 is used instead of quadrature.
    static BubbleSpec unit_sphere(int mesh_level = 3, bool exact_hat_A = false) {
        BubbleSpec b;
        b.shape_id = ShapeId::sphere;
        b.boundary_mesh = geom::icosphere(mesh_level);
        b.volume_B = 4.0 * pi / 3.0;
        if (exact_hat_A)
            b.hat_A_ref = -8.0 * pi / 3.0;
        else
            b.compute_hat_A();
        b.validate();
        return b;
    }

    /// Unit cube [-1/2, 1/2]^3 meshed with n x n quads per face.
    static BubbleSpec unit_cube(int n = 8) {
        BubbleSpec b;
        b.shape_id = ShapeId::cube;
        b.boundary_mesh = geom::box_surface(n);
        b.volume_B = 1.0;
        b.compute_hat_A();
        return b;
    }

    static BubbleSpec from_mesh(geom::SurfaceMesh mesh) {
        BubbleSpec b;
        b.shape_id = ShapeId::mesh;
        b.boundary_mesh = std::move(mesh);
        b.boundary_mesh.require_closed_outward();
        b.volume_B = b.boundary_mesh.signed_volume();
        b.compute_hat_A();
        return b;
    }
};

} // namespace bubblelab
