#pragma once

#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/cluster/density.hpp"
#include "bubblelab/cluster/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace bubblelab {

struct PlacementOptions {
    double d_min = 0.5;
    int attempts = 100;
};

namespace detail {

/// Extra centers for a cell: jittered nodes of an m x m (x m) sub-grid,
/// rejected until they keep the minimum distance. `map` sends unit-cube
/// coordinates to a candidate point (or returns false if it leaves the set).
template <int Dim, typename Map>
void place_extras(Cluster& c, int extra, PointHash& hash, std::mt19937_64& rng, const PlacementOptions& opt, Map map) {
    const int m = std::max(2, static_cast<int>(std::ceil(std::pow(extra + 1.0, 1.0 / Dim) - 1e-9)));
    const double dmin = c.min_distance_required();
    for (int e = 0; e < extra; ++e) {
        bool placed = false;
        for (int attempt = 0; attempt < opt.attempts && !placed; ++attempt) {
            int node = static_cast<int>(uniform01(rng) * std::pow(m, Dim));
            std::array<double, 3> q{0.5, 0.5, 0.5};
            for (int k = 0; k < Dim; ++k) {
                const int ik = node % m;
                node /= m;
                const double jitter = 0.5 * (uniform01(rng) - 0.5);
                q[static_cast<std::size_t>(k)] = (ik + 0.5 + jitter) / m;
            }
            Vec3 p, normal;
            if (!map(q, p, normal)) continue;
            if (hash.nearest(p) < dmin) continue;
            c.centers.push_back(p);
            if (c.kind == Cluster::Kind::surface) c.normals.push_back(normal);
            hash.insert(static_cast<int>(c.centers.size()) - 1);
            placed = true;
        }
        if (!placed) {
            std::ostringstream os;
            os << "could not place bubble " << e + 1 << " of " << extra << " extra in a cell after " << opt.attempts
               << " attempts (minimum distance " << dmin << ")";
            fail(ErrorKind::placement, os.str());
        }
    }
}

} // namespace detail

/// Rubik-style volumetric distribution. Cell centers sit on a lattice of pitch
/// a^{s/3} aligned with the domain center and are visited shell by shell; a cell
/// around z has volume a^s [K(z)+1]/(K(z)+1) and holds [K(z)]+1 bubbles.
/// Cells whose center falls outside Omega are dropped.
inline Cluster build_volumetric(const Domain& dom, const DensityField& K, double a, double s, double t, std::uint64_t seed,
                                const PlacementOptions& opt = {}) {
    require(a > 0.0 && a < 1.0, ErrorKind::config, "a must lie in (0, 1)");
    require(s > 0.0 && t >= 0.0, ErrorKind::config, "s must be positive and t non-negative");
    require(t >= s / 3.0 - 1e-12, ErrorKind::infeasible,
            "t < s/3: cells of volume a^s cannot hold bubbles at distance a^t");
    Cluster c;
    c.kind = Cluster::Kind::volumetric;
    c.a = a;
    c.s = s;
    c.t = t;
    c.d_min = opt.d_min;
    c.max_count = K.max_count();
    c.domain_measure = dom.volume();
    c.box_lo = dom.lo();
    c.box_hi = dom.hi();

    const double pitch = std::pow(a, s / 3.0);
    const Vec3 ctr = dom.center();
    const Vec3 ext = dom.hi() - dom.lo();
    // Per axis, an even cell count puts a cell face at the center, an odd one a cell center.
    std::array<long, 3> n{};
    Vec3 shift = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
        const long cells = std::max(1L, std::lround(ext[k] / pitch));
        if (cells % 2 == 0) shift[k] = 0.5;
        n[static_cast<std::size_t>(k)] = static_cast<long>(std::ceil(0.5 * ext[k] / pitch)) + 1;
    }

    std::vector<std::array<long, 4>> slots; // shell, k, j, i
    auto ring = [&](long i, int axis) { return shift[axis] > 0.0 ? std::labs(2 * i + 1) : std::labs(2 * i); };
    for (long k = -n[2]; k <= n[2]; ++k)
        for (long j = -n[1]; j <= n[1]; ++j)
            for (long i = -n[0]; i <= n[0]; ++i)
                slots.push_back({std::max({ring(i, 0), ring(j, 1), ring(k, 2)}), k, j, i});
    std::sort(slots.begin(), slots.end());

    std::mt19937_64 rng(seed);
    detail::PointHash hash(std::max(c.min_distance_required(), 1e-300), &c.centers);
    const double as = std::pow(a, s);
    for (const auto& sl : slots) {
        const Vec3 z = ctr + pitch * (Vec3(static_cast<double>(sl[3]), static_cast<double>(sl[2]), static_cast<double>(sl[1])) + shift);
        const double kz = K(z);
        const int count = static_cast<int>(std::floor(kz)) + 1;
        const double vol = as * count / (kz + 1.0);
        const double side = std::cbrt(vol);
        const double half = 0.5 * side;
        if (!dom.cube_intersects(z, half)) continue;
        if (!dom.cube_inside(z, half)) c.boundary_measure += vol;
        if (!dom.contains(z)) {
            c.dropped_measure += vol;
            ++c.dropped_cells;
            continue;
        }
        Cell cell;
        cell.center = z;
        cell.measure = vol;
        cell.side = side;
        cell.radius = half * std::sqrt(3.0);
        cell.count = count;
        cell.first = static_cast<int>(c.centers.size());
        cell.K = kz;
        c.centers.push_back(z);
        hash.insert(cell.first);
        const Vec3 lo = z - Vec3::Constant(half);
        detail::place_extras<3>(c, count - 1, hash, rng, opt, [&](const std::array<double, 3>& q, Vec3& p, Vec3& nrm) {
            p = lo + side * Vec3(q[0], q[1], q[2]);
            nrm = Vec3::Zero();
            return dom.contains(p);
        });
        c.cells.push_back(cell);
    }
    require(!c.cells.empty(), ErrorKind::placement, "no cell center fell inside the domain");
    return c;
}

} // namespace bubblelab
