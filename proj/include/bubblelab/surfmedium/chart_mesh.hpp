#pragma once

#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/core/error.hpp"
#include "bubblelab/geometry/generators.hpp"
#include "bubblelab/geometry/mesh.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace bubblelab {

struct ChartMeshOptions {
    int sphere_level = 3;          // icosphere level when the chart is a full sphere
    int cells = 24;                // quads along the longer parameter direction otherwise
    geom::DiskMeshOptions disk{};  // graded toward the rim
};

/// Panel mesh of a chart: icosphere for a closed sphere, graded disk for disks,
/// a parameter grid (edge-graded for open patches) for the rest.
inline geom::SurfaceMesh chart_mesh(const Chart& ch, const ChartMeshOptions& opt = {}) {
    if (ch.closed()) return geom::icosphere(opt.sphere_level, ch.radius(), ch.origin());
    if (ch.kind() == Chart::Kind::plane_disk) return geom::graded_disk(ch.radius(), ch.origin(), ch.normal_axis(), opt.disk);
    require(opt.cells >= 2, ErrorKind::config, "chart mesh needs at least two cells per direction");
    const auto& box = ch.param_box();
    const double lu = box[1] - box[0], lv = box[3] - box[2];
    const bool periodic = ch.periodic_u();
    auto grading = [&](int n, bool graded) {
        // node positions in [0,1]; cosine spacing clusters nodes at open edges
        std::vector<double> x(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / n;
            x[static_cast<std::size_t>(i)] = graded ? 0.5 * (1.0 - std::cos(pi * s)) : s;
        }
        return x;
    };
    const double scale_u = ch.kind() == Chart::Kind::sphere ? ch.radius() * std::sin(0.5 * (box[2] + box[3])) : 1.0;
    const double scale_v = ch.kind() == Chart::Kind::sphere ? ch.radius() : 1.0;
    const double len_u = lu * scale_u, len_v = lv * scale_v;
    const int nu = std::max(2, static_cast<int>(std::lround(opt.cells * len_u / std::max(len_u, len_v))));
    const int nv = std::max(2, static_cast<int>(std::lround(opt.cells * len_v / std::max(len_u, len_v))));
    const auto gu = grading(nu, !periodic);
    const bool pole0 = ch.kind() == Chart::Kind::sphere && box[2] <= 0.0;
    const bool pole1 = ch.kind() == Chart::Kind::sphere && box[3] >= pi;
    std::vector<double> gv = grading(nv, true);
    const int cols = periodic ? nu : nu + 1;
    std::vector<Vec3> verts;
    for (int j = 0; j <= nv; ++j)
        for (int i = 0; i < cols; ++i)
            verts.push_back(ch.point(box[0] + lu * gu[static_cast<std::size_t>(i)], box[2] + lv * gv[static_cast<std::size_t>(j)]));
    auto id = [&](int i, int j) { return j * cols + (periodic ? i % nu : i); };
    std::vector<std::array<int, 4>> faces;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (j == 0 && pole0)
                faces.push_back({a, c, d, -1});
            else if (j == nv - 1 && pole1)
                faces.push_back({a, b, c, -1});
            else
                faces.push_back({a, b, c, d});
        }
    geom::SurfaceMesh m(std::move(verts), std::move(faces));
    // orient along the chart normal
    const auto& p0 = m[0];
    const double u0 = box[0] + 0.5 * lu * gu[1], v0 = box[2] + 0.5 * lv * gv[1];
    if (p0.normal.dot(ch.normal(u0, v0)) < 0.0) {
        std::vector<std::array<int, 4>> flipped;
        for (const auto& p : m.panels()) {
            if (p.nv == 3)
                flipped.push_back({p.v[0], p.v[2], p.v[1], -1});
            else
                flipped.push_back({p.v[0], p.v[3], p.v[2], p.v[1]});
        }
        std::vector<Vec3> vv = m.vertices();
        return geom::SurfaceMesh(std::move(vv), std::move(flipped));
    }
    return m;
}

} // namespace bubblelab
