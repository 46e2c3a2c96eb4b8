#pragma once

#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/cluster/density.hpp"
#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/cluster/volumetric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bubblelab {

namespace detail {

/// Smallest ub > u with chart area of [u,ub] x [va,vb] equal to target.
inline double solve_u_extent(const Chart& ch, double u, double va, double vb, double target, double guess) {
    double lo = u, hi = u + std::max(guess, 1e-12);
    for (int i = 0; i < 200 && ch.rect_area(u, hi, va, vb) < target; ++i) hi = u + 2.0 * (hi - u);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ch.rect_area(u, mid, va, vb) < target ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * (1.0 + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

struct Quad {
    double u0, u1, v0, v1;
};

} // namespace detail

/// Surface analogue of build_volumetric. The chart's parameter box is cut into
/// rows of surface height ~a^{s/2}; each row is marched in u with
/// quadrilaterals of surface area a^s [K+1]/(K+1). Partial quadrilaterals at
/// the end of a row and those crossing the boundary of a disk chart are dropped.
inline Cluster build_surface(const Chart& ch, const DensityField& K, double a, double s, double t, std::uint64_t seed,
                             const PlacementOptions& opt = {}) {
    require(a > 0.0 && a < 1.0, ErrorKind::config, "a must lie in (0, 1)");
    require(s > 0.0 && t >= 0.0, ErrorKind::config, "s must be positive and t non-negative");
    require(t >= s / 2.0 - 1e-12, ErrorKind::infeasible,
            "t < s/2: surface cells of area a^s cannot hold bubbles at distance a^t");
    Cluster c;
    c.kind = Cluster::Kind::surface;
    c.a = a;
    c.s = s;
    c.t = t;
    c.d_min = opt.d_min;
    c.max_count = K.max_count();
    c.domain_measure = ch.total_area();

    const double L = std::pow(a, s / 2.0);
    const double as = std::pow(a, s);
    const auto [u0, u1, v0, v1] = ch.param_box();
    auto target = [&](double u, double v) {
        const double kz = K(ch.point(u, v));
        return as * (std::floor(kz) + 1.0) / (kz + 1.0);
    };

    std::vector<detail::Quad> quads;
    auto drop = [&](double area, bool boundary) {
        if (area <= 0.0) return;
        c.dropped_measure += area;
        if (boundary) c.boundary_measure += area;
        ++c.dropped_cells;
    };

    if (ch.kind() == Chart::Kind::plane_disk) {
        // Centered lattice of pitch L; squares crossing the rim are dropped.
        const double R = ch.radius();
        const long n = static_cast<long>(std::ceil(R / L - 0.5)) + 1;
        for (long j = -n; j <= n; ++j) {
            for (long i = -n; i <= n; ++i) {
                const double uc = i * L, vc = j * L;
                const double side = std::sqrt(target(uc, vc));
                const detail::Quad q{uc - 0.5 * side, uc + 0.5 * side, vc - 0.5 * side, vc + 0.5 * side};
                const bool inside = ch.inside(q.u0, q.v0) && ch.inside(q.u1, q.v0) && ch.inside(q.u0, q.v1) &&
                                    ch.inside(q.u1, q.v1);
                if (inside) {
                    quads.push_back(q);
                } else {
                    const double part = ch.clipped_area(q.u0, q.u1, q.v0, q.v1);
                    if (part > 0.0) drop(part, true);
                }
            }
        }
    } else {
        // Rows uniform in v; count from the surface length of the middle v-curve.
        const double um = ch.periodic_u() ? u0 : 0.5 * (u0 + u1);
        double len = 0.0;
        {
            const auto g = quad::gauss_legendre(16, v0, v1);
            for (std::size_t i = 0; i < g.nodes.size(); ++i) len += g.weights[i] * ch.v_speed(um, g.nodes[i]);
        }
        const long rows = std::max(1L, std::lround(len / L));
        const double u_end = u1;
        const double ptol = 1e-9 * (u1 - u0);
        for (long r = 0; r < rows; ++r) {
            const double va = v0 + (v1 - v0) * r / rows, vb = v0 + (v1 - v0) * (r + 1) / rows;
            const double vm = 0.5 * (va + vb);
            double u = u0;
            while (u < u_end - ptol) {
                // K may vary along the row: re-solve with the target at the current midpoint.
                const double speed = std::max(1e-300, ch.rect_area(u, u + 1e-6, va, vb) / 1e-6 / (vb - va));
                double ub = u + target(u, vm) / ((vb - va) * speed);
                for (int it = 0; it < 4; ++it) ub = detail::solve_u_extent(ch, u, va, vb, target(0.5 * (u + ub), vm), ub - u);
                if (std::abs(ub - u_end) <= ptol) ub = u_end;
                if (ub > u_end) {
                    drop(ch.rect_area(u, u_end, va, vb), !ch.closed());
                    break;
                }
                quads.push_back({u, ub, va, vb});
                u = ub;
            }
        }
    }

    // Rubik ordering: outward from the chart center.
    const Vec3 pc = ch.kind() == Chart::Kind::sphere
                        ? ch.point(0.0, ch.closed() ? 0.0 : v0)
                        : ch.point(0.5 * (u0 + u1), 0.5 * (v0 + v1));
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < quads.size(); ++i) {
        const auto& q = quads[i];
        order.emplace_back((ch.point(0.5 * (q.u0 + q.u1), 0.5 * (q.v0 + q.v1)) - pc).norm(), i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });

    std::mt19937_64 rng(seed);
    detail::PointHash hash(std::max(c.min_distance_required(), 1e-300), &c.centers);
    for (const auto& [dist, qi] : order) {
        (void)dist;
        const auto& q = quads[qi];
        const double um = 0.5 * (q.u0 + q.u1), vm = 0.5 * (q.v0 + q.v1);
        const Vec3 z = ch.point(um, vm);
        const double kz = K(z);
        Cell cell;
        cell.center = z;
        cell.measure = ch.rect_area(q.u0, q.u1, q.v0, q.v1);
        cell.side = std::sqrt(cell.measure);
        cell.count = static_cast<int>(std::floor(kz)) + 1;
        cell.first = static_cast<int>(c.centers.size());
        cell.K = kz;
        cell.param = {q.u0, q.u1, q.v0, q.v1};
        for (double fu : {0.0, 0.5, 1.0})
            for (double fv : {0.0, 0.5, 1.0})
                cell.radius = std::max(cell.radius, (ch.point(q.u0 + fu * (q.u1 - q.u0), q.v0 + fv * (q.v1 - q.v0)) - z).norm());
        c.centers.push_back(z);
        c.normals.push_back(ch.normal(um, vm));
        hash.insert(cell.first);
        detail::place_extras<2>(c, cell.count - 1, hash, rng, opt, [&](const std::array<double, 3>& w, Vec3& p, Vec3& nrm) {
            const double u = q.u0 + w[0] * (q.u1 - q.u0), v = q.v0 + w[1] * (q.v1 - q.v0);
            p = ch.point(u, v);
            nrm = ch.normal(u, v);
            return ch.inside(u, v);
        });
        c.cells.push_back(cell);
    }
    require(!c.cells.empty(), ErrorKind::placement, "no surface cell fits inside the chart");

    c.box_lo = c.box_hi = c.centers.front();
    for (const auto& z : c.centers) {
        c.box_lo = c.box_lo.cwiseMin(z);
        c.box_hi = c.box_hi.cwiseMax(z);
    }
    return c;
}

} // namespace bubblelab
