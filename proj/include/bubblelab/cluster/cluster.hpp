#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bubblelab {

/// One Rubik cell (cube in Omega or quadrilateral on Sigma).
struct Cell {
    Vec3 center = Vec3::Zero();
    double measure = 0.0; // volume or area
    double side = 0.0;    // cube side, or sqrt(area) on a surface
    double radius = 0.0;  // max distance from center to the cell boundary
    int count = 1;        // floor(K) + 1 bubbles
    int first = 0;        // index of its first center
    double K = 0.0;
    std::array<double, 4> param{0, 0, 0, 0}; // surface cells: u0, u1, v0, v1
};

/// Bubble centers grouped by cells, with the boundary-trimming bookkeeping.
struct Cluster {
    enum class Kind { volumetric, surface };
    Kind kind = Kind::volumetric;
    double a = 0.0, s = 0.0, t = 0.0;
    double d_min = 0.5; // minimum distance is d_min * a^t
    std::vector<Vec3> centers;
    std::vector<Cell> cells;
    std::vector<Vec3> normals; // surface clusters: unit normal of Sigma at each center
    int max_count = 1;         // sup [K + 1]
    double domain_measure = 0.0;
    double dropped_measure = 0.0;  // cells cut off by the boundary
    double boundary_measure = 0.0; // all cells meeting the boundary
    int dropped_cells = 0;
    Vec3 box_lo = Vec3::Zero(), box_hi = Vec3::Zero();

    std::size_t size() const noexcept { return centers.size(); }
    double min_distance_required() const { return d_min * std::pow(a, t); }
};

using VolumetricCluster = Cluster;
using SurfaceCluster = Cluster;

constexpr std::string_view to_string(Cluster::Kind k) noexcept {
    return k == Cluster::Kind::volumetric ? "volumetric" : "surface";
}

namespace detail {

/// Portable uniform double in [0, 1) from a 64-bit engine (top 53 bits).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform-grid hash of points for minimum-distance queries.
class PointHash {
public:
    PointHash(double h, const std::vector<Vec3>* pts) : h_(h), pts_(pts) {}

    void insert(int id) { map_[key(cell((*pts_)[static_cast<std::size_t>(id)]))].push_back(id); }

    /// Smallest distance from x to any inserted point within one hash cell (inf if none).
    double nearest(const Vec3& x) const {
        const auto c = cell(x);
        double best = std::numeric_limits<double>::infinity();
        for (long i = -1; i <= 1; ++i)
            for (long j = -1; j <= 1; ++j)
                for (long k = -1; k <= 1; ++k) {
                    const auto it = map_.find(key({c[0] + i, c[1] + j, c[2] + k}));
                    if (it == map_.end()) continue;
                    for (int id : it->second) best = std::min(best, ((*pts_)[static_cast<std::size_t>(id)] - x).norm());
                }
        return best;
    }

private:
    std::array<long, 3> cell(const Vec3& x) const {
        return {static_cast<long>(std::floor(x.x() / h_)), static_cast<long>(std::floor(x.y() / h_)),
                static_cast<long>(std::floor(x.z() / h_))};
    }
    static std::uint64_t key(const std::array<long, 3>& c) {
        const auto m = [](long v) { return static_cast<std::uint64_t>(v + (1L << 20)) & 0x1FFFFFu; };
        return (m(c[0]) << 42) | (m(c[1]) << 21) | m(c[2]);
    }

    double h_;
    const std::vector<Vec3>* pts_;
    std::unordered_map<std::uint64_t, std::vector<int>> map_;
};

} // namespace detail
} // namespace bubblelab
