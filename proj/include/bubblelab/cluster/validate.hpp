#pragma once

#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/cluster/domain.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bubblelab {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct DiagnosticsReport {
    std::vector<Check> checks;
    double min_distance = 0.0; // smallest pairwise center distance found (inf if M = 1)

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const Check& operator[](const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        fail(ErrorKind::config, "no diagnostic named " + name);
    }
};

/// Smallest pairwise distance, exact when it is below `probe` (uses a hash of that cell size).
inline double min_pairwise_distance(const std::vector<Vec3>& pts, double probe) {
    double best = std::numeric_limits<double>::infinity();
    detail::PointHash hash(probe, &pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best = std::min(best, hash.nearest(pts[i]));
        hash.insert(static_cast<int>(i));
    }
    return best;
}

/// Recomputes the cluster invariants; report only, never throws.
inline DiagnosticsReport validate(const Cluster& c, const Domain* domain = nullptr) {
    DiagnosticsReport r;
    auto add = [&](std::string name, bool ok, std::string detail) { r.checks.push_back({std::move(name), ok, std::move(detail)}); };
    const double as = std::pow(c.a, c.s);

    {
        double worst = 0.0;
        for (const auto& cell : c.cells)
            worst = std::max(worst, std::abs(cell.measure - as * cell.count / (cell.K + 1.0)) / as);
        std::ostringstream os;
        os << "max relative deviation " << worst;
        add("cell_measure", worst <= 1e-9, os.str());
    }
    {
        bool ok = true;
        int total = 0;
        for (const auto& cell : c.cells) {
            ok = ok && cell.count == static_cast<int>(std::floor(cell.K)) + 1 && cell.first == total;
            total += cell.count;
        }
        ok = ok && total == static_cast<int>(c.centers.size());
        add("cell_counts", ok, "M = " + std::to_string(c.centers.size()) + ", sum of counts = " + std::to_string(total));
    }
    {
        const double need = c.min_distance_required();
        const double probe = std::max(need, 1e-300);
        r.min_distance = min_pairwise_distance(c.centers, probe);
        std::ostringstream os;
        os << "required " << need << ", smallest pair below probe: "
           << (std::isfinite(r.min_distance) ? std::to_string(r.min_distance) : std::string("none"));
        add("min_distance", !(r.min_distance < need), os.str());
    }
    {
        const double bound = c.max_count * std::ceil((c.domain_measure + c.boundary_measure) / as);
        std::ostringstream os;
        os << "M = " << c.centers.size() << ", bound " << bound;
        add("count_bound", static_cast<double>(c.centers.size()) <= bound, os.str());
    }
    {
        bool ok = true;
        for (const auto& cell : c.cells)
            for (int k = 0; k < cell.count; ++k) {
                const std::size_t idx = static_cast<std::size_t>(cell.first + k);
                if (idx >= c.centers.size()) {
                    ok = false;
                    continue;
                }
                const Vec3 d = c.centers[idx] - cell.center;
                if (c.kind == Cluster::Kind::volumetric)
                    ok = ok && d.cwiseAbs().maxCoeff() <= 0.5 * cell.side * (1.0 + 1e-12);
                else
                    ok = ok && d.norm() <= cell.radius * (1.0 + 1e-9);
            }
        add("centers_in_cells", ok, ok ? "all centers inside their cells" : "a center lies outside its cell");
    }
    if (domain && c.kind == Cluster::Kind::volumetric) {
        bool ok = true;
        for (const auto& cell : c.cells) ok = ok && domain->cube_intersects(cell.center, 0.5 * cell.side);
        add("cells_meet_domain", ok, ok ? "every cell intersects the domain" : "a cell misses the domain");
    }
    return r;
}

} // namespace bubblelab
