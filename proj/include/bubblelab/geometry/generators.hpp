#pragma once

#include "bubblelab/geometry/mesh.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace bubblelab::geom {

/// Icosahedron refined `level` times, vertices projected to the sphere.
/// Panel count is 20 * 4^level.
inline SurfaceMesh icosphere(int level, double radius = 1.0, const Vec3& center = Vec3::Zero()) {
    require(level >= 0 && level <= 8, ErrorKind::geometry, "icosphere level out of range");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& x : v) x.normalize();
    std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = mid.find(key); it != mid.end()) return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            const int id = static_cast<int>(v.size()) - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> g;
        g.reserve(f.size() * 4);
        for (const auto& tri : f) {
            const int ab = midpoint(tri[0], tri[1]), bc = midpoint(tri[1], tri[2]), ca = midpoint(tri[2], tri[0]);
            g.push_back({tri[0], ab, ca});
            g.push_back({tri[1], bc, ab});
            g.push_back({tri[2], ca, bc});
            g.push_back({ab, bc, ca});
        }
        f = std::move(g);
    }
    for (auto& x : v) x = center + radius * x;
    std::vector<std::array<int, 4>> faces;
    faces.reserve(f.size());
    for (const auto& tri : f) faces.push_back({tri[0], tri[1], tri[2], -1});
    return SurfaceMesh(std::move(v), std::move(faces));
}

/// Surface of the axis-aligned box [lo, hi] with n x n quads per face, outward oriented.
inline SurfaceMesh box_surface(int n, const Vec3& lo = Vec3(-0.5, -0.5, -0.5), const Vec3& hi = Vec3(0.5, 0.5, 0.5)) {
    require(n >= 1, ErrorKind::geometry, "box mesh needs n >= 1");
    std::vector<Vec3> v;
    std::map<std::array<long, 3>, int> index;
    auto vertex = [&](int i, int j, int k) {
        const std::array<long, 3> key{i, j, k};
        if (auto it = index.find(key); it != index.end()) return it->second;
        const Vec3 u(static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n);
        v.push_back(lo + (hi - lo).cwiseProduct(u));
        const int id = static_cast<int>(v.size()) - 1;
        index.emplace(key, id);
        return id;
    };
    std::vector<std::array<int, 4>> faces;
    // For each axis and side, lay an n x n grid of quads with outward orientation.
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int side = 0; side < 2; ++side) {
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    std::array<std::array<int, 3>, 4> c{};
                    const int pq[4][2] = {{p, q}, {p + 1, q}, {p + 1, q + 1}, {p, q + 1}};
                    for (int m = 0; m < 4; ++m) {
                        c[static_cast<std::size_t>(m)][static_cast<std::size_t>(axis)] = side * n;
                        c[static_cast<std::size_t>(m)][static_cast<std::size_t>(a1)] = pq[m][0];
                        c[static_cast<std::size_t>(m)][static_cast<std::size_t>(a2)] = pq[m][1];
                    }
                    std::array<int, 4> quad{};
                    for (int m = 0; m < 4; ++m)
                        quad[static_cast<std::size_t>(m)] = vertex(c[static_cast<std::size_t>(m)][0], c[static_cast<std::size_t>(m)][1],
                                                                   c[static_cast<std::size_t>(m)][2]);
                    // (a1, a2) ordering gives normal +axis; flip for the low side.
                    if (side == 0) std::swap(quad[1], quad[3]);
                    faces.push_back(quad);
                }
        }
    }
    return SurfaceMesh(std::move(v), std::move(faces));
}

inline std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& normal) {
    const Vec3 n = normal.normalized();
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = (helper - helper.dot(n) * n).normalized();
    return {e1, n.cross(e1)};
}

struct DiskMeshOptions {
    int uniform_rings = 8;
    int base_sectors = 6;     // rotational symmetry order of the mesh
    int grading_levels = 3;   // rings refined geometrically toward the rim
    double grading_factor = 0.7;
};

/// Flat disk meshed in rings. Sector counts are multiples of base_sectors so
/// rotation by 2 pi / base_sectors maps the mesh onto itself. The last
/// grading_levels rings have widths h q, h q^2, ... toward the rim.
inline SurfaceMesh graded_disk(double radius, const Vec3& center, const Vec3& normal, const DiskMeshOptions& opt = {}) {
    require(radius > 0.0 && opt.uniform_rings >= 1 && opt.base_sectors >= 3, ErrorKind::geometry,
            "bad disk mesh parameters");
    const auto [e1, e2] = orthonormal_frame(normal);
    double graded = 0.0;
    for (int l = 1; l <= opt.grading_levels; ++l) graded += std::pow(opt.grading_factor, l);
    const double h = radius / (opt.uniform_rings + graded);
    std::vector<double> radii{0.0};
    std::vector<int> ring_level;
    for (int k = 1; k <= opt.uniform_rings; ++k) {
        radii.push_back(k * h);
        ring_level.push_back(0);
    }
    for (int l = 1; l <= opt.grading_levels; ++l) {
        radii.push_back(radii.back() + h * std::pow(opt.grading_factor, l));
        ring_level.push_back(l);
    }
    radii.back() = radius;

    std::vector<Vec3> v;
    std::vector<std::array<int, 4>> faces;
    std::vector<int> levels;
    auto point = [&](double r, double phi) { return center + r * (std::cos(phi) * e1 + std::sin(phi) * e2); };
    v.push_back(center);
    std::vector<int> prev{0};
    int prev_n = 0;
    for (std::size_t k = 1; k < radii.size(); ++k) {
        int n = opt.base_sectors;
        if (prev_n > 0) {
            n = prev_n;
            if (ring_level[k - 1] == 0 && 2.0 * pi * radii[k] / n > 1.5 * h) n *= 2;
        }
        std::vector<int> ring;
        for (int j = 0; j < n; ++j) {
            v.push_back(point(radii[k], 2.0 * pi * j / n));
            ring.push_back(static_cast<int>(v.size()) - 1);
        }
        const int lvl = ring_level[k - 1];
        if (prev_n == 0) {
            for (int j = 0; j < n; ++j) {
                faces.push_back({0, ring[static_cast<std::size_t>(j)], ring[static_cast<std::size_t>((j + 1) % n)], -1});
                levels.push_back(lvl);
            }
        } else if (n == prev_n) {
            for (int j = 0; j < n; ++j) {
                faces.push_back({prev[static_cast<std::size_t>(j)], ring[static_cast<std::size_t>(j)],
                                 ring[static_cast<std::size_t>((j + 1) % n)], prev[static_cast<std::size_t>((j + 1) % n)]});
                levels.push_back(lvl);
            }
        } else {
            for (int j = 0; j < prev_n; ++j) {
                const int a = prev[static_cast<std::size_t>(j)], b = prev[static_cast<std::size_t>((j + 1) % prev_n)];
                const int A = ring[static_cast<std::size_t>(2 * j)], M = ring[static_cast<std::size_t>(2 * j + 1)],
                          B = ring[static_cast<std::size_t>((2 * j + 2) % n)];
                faces.push_back({a, A, M, -1});
                faces.push_back({a, M, b, -1});
                faces.push_back({b, M, B, -1});
                levels.insert(levels.end(), 3, lvl);
            }
        }
        prev = std::move(ring);
        prev_n = n;
    }
    return SurfaceMesh(std::move(v), std::move(faces), std::move(levels));
}

/// Flat rectangle centered at `center` with half-extents (hx, hy) along the
/// frame of `normal`, nx x ny quads.
inline SurfaceMesh rectangle(const Vec3& center, const Vec3& normal, double hx, double hy, int nx, int ny) {
    require(nx >= 1 && ny >= 1 && hx > 0 && hy > 0, ErrorKind::geometry, "bad rectangle mesh parameters");
    const auto [e1, e2] = orthonormal_frame(normal);
    std::vector<Vec3> v;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            v.push_back(center + (-hx + 2.0 * hx * i / nx) * e1 + (-hy + 2.0 * hy * j / ny) * e2);
    std::vector<std::array<int, 4>> faces;
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return SurfaceMesh(std::move(v), std::move(faces));
}

} // namespace bubblelab::geom
