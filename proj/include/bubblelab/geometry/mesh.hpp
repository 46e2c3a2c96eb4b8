#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bubblelab::geom {

/// Flat panel (triangle or planar quad) with cached geometry.
struct Panel {
    std::array<int, 4> v{-1, -1, -1, -1};
    int nv = 3;
    Vec3 centroid = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    double area = 0.0;
    double diameter = 0.0;
    int level = 0; // grading level, 0 = interior
};

struct Triangle {
    Vec3 a, b, c;
    double area() const { return 0.5 * (b - a).cross(c - a).norm(); }
    Vec3 centroid() const { return (a + b + c) / 3.0; }
    double diameter() const { return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()}); }
    Vec3 point(const std::array<double, 3>& w) const { return w[0] * a + w[1] * b + w[2] * c; }
};

/// Triangulated (or mixed tri/quad) surface. Orientation follows the vertex
/// order of each panel (counter-clockwise seen from the normal side).
class SurfaceMesh {
public:
    SurfaceMesh() = default;

    SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> faces, std::vector<int> levels = {})
        : vertices_(std::move(vertices)) {
        panels_.reserve(faces.size());
        for (std::size_t f = 0; f < faces.size(); ++f) {
            Panel p;
            p.v = faces[f];
            p.nv = faces[f][3] < 0 ? 3 : 4;
            if (!levels.empty()) p.level = levels[f];
            for (int i = 0; i < p.nv; ++i)
                require(p.v[static_cast<std::size_t>(i)] >= 0 &&
                            p.v[static_cast<std::size_t>(i)] < static_cast<int>(vertices_.size()),
                        ErrorKind::geometry, "face references a missing vertex");
            panels_.push_back(p);
        }
        update_geometry();
        build_edges();
    }

    const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
    const std::vector<Panel>& panels() const noexcept { return panels_; }
    std::size_t size() const noexcept { return panels_.size(); }
    const Panel& operator[](std::size_t i) const { return panels_[i]; }

    bool is_closed() const noexcept { return boundary_edges_.empty() && nonmanifold_edges_ == 0; }
    const std::vector<std::pair<int, int>>& boundary_edges() const noexcept { return boundary_edges_; }

    double total_area() const {
        double s = 0.0;
        for (const auto& p : panels_) s += p.area;
        return s;
    }

    /// Sum of area * normal; zero for a closed surface.
    Vec3 vector_area() const {
        Vec3 s = Vec3::Zero();
        for (const auto& p : panels_) s += p.area * p.normal;
        return s;
    }

    /// Enclosed volume by the divergence theorem; positive for outward orientation.
    double signed_volume() const {
        double v = 0.0;
        for (const auto& p : panels_) v += p.area * p.normal.dot(p.centroid);
        return v / 3.0;
    }

    double max_diameter() const {
        double m = 0.0;
        for (const auto& p : panels_) m = std::max(m, p.diameter);
        return m;
    }

    /// Panel split into triangles (one for a triangle, two for a quad).
    std::vector<Triangle> triangles(std::size_t i) const {
        const auto& p = panels_[i];
        const auto& x = vertices_;
        const Vec3& a = x[static_cast<std::size_t>(p.v[0])];
        const Vec3& b = x[static_cast<std::size_t>(p.v[1])];
        const Vec3& c = x[static_cast<std::size_t>(p.v[2])];
        if (p.nv == 3) return {Triangle{a, b, c}};
        const Vec3& d = x[static_cast<std::size_t>(p.v[3])];
        return {Triangle{a, b, c}, Triangle{a, c, d}};
    }

    /// Throws unless the mesh is closed, manifold and outward oriented.
    void require_closed_outward(double tol = 1e-8) const {
        require(!panels_.empty(), ErrorKind::geometry, "empty mesh");
        require(is_closed(), ErrorKind::geometry, "mesh is not closed");
        require(vector_area().norm() <= tol * total_area(), ErrorKind::geometry,
                "mesh fails the closure test (sum of area * normal is not zero)");
        require(signed_volume() > 0.0, ErrorKind::geometry, "mesh is not outward oriented");
    }

    SurfaceMesh transformed(const Eigen::Matrix3d& rot, const Vec3& shift, double scale = 1.0) const {
        std::vector<Vec3> v;
        v.reserve(vertices_.size());
        for (const auto& x : vertices_) v.push_back(scale * (rot * x) + shift);
        std::vector<std::array<int, 4>> f;
        std::vector<int> lv;
        for (const auto& p : panels_) {
            f.push_back(p.v);
            lv.push_back(p.level);
        }
        return SurfaceMesh(std::move(v), std::move(f), std::move(lv));
    }

private:
    void update_geometry() {
        for (std::size_t i = 0; i < panels_.size(); ++i) {
            auto& p = panels_[i];
            const auto tris = triangles(i);
            Vec3 nsum = Vec3::Zero(), csum = Vec3::Zero();
            double area = 0.0, diam = 0.0;
            for (const auto& t : tris) {
                const Vec3 cr = (t.b - t.a).cross(t.c - t.a);
                nsum += cr;
                area += 0.5 * cr.norm();
                csum += 0.5 * cr.norm() * t.centroid();
            }
            for (int a = 0; a < p.nv; ++a)
                for (int b = a + 1; b < p.nv; ++b)
                    diam = std::max(diam, (vertices_[static_cast<std::size_t>(p.v[static_cast<std::size_t>(a)])] -
                                           vertices_[static_cast<std::size_t>(p.v[static_cast<std::size_t>(b)])])
                                              .norm());
            require(area > 0.0 && std::isfinite(area), ErrorKind::geometry, "degenerate panel");
            p.area = area;
            p.normal = nsum.normalized();
            p.centroid = csum / area;
            p.diameter = diam;
        }
    }

    void build_edges() {
        std::map<std::pair<int, int>, int> directed;
        for (const auto& p : panels_)
            for (int k = 0; k < p.nv; ++k) {
                const int a = p.v[static_cast<std::size_t>(k)], b = p.v[static_cast<std::size_t>((k + 1) % p.nv)];
                ++directed[{a, b}];
            }
        for (const auto& [e, count] : directed) {
            const auto rev = directed.find({e.second, e.first});
            const int opposite = rev == directed.end() ? 0 : rev->second;
            if (count > 1 || opposite > 1) ++nonmanifold_edges_;
            if (opposite == 0) boundary_edges_.push_back(e);
        }
    }

    std::vector<Vec3> vertices_;
    std::vector<Panel> panels_;
    std::vector<std::pair<int, int>> boundary_edges_;
    int nonmanifold_edges_ = 0;
};

// ---------------------------------------------------------------------------
// ASCII mesh format: "v x y z", "f i j k" (triangle), "q i j k l" (quad), 0-based.

inline SurfaceMesh read_mesh(std::istream& is) {
    std::vector<Vec3> v;
    std::vector<std::array<int, 4>> f;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            require(static_cast<bool>(ls >> x >> y >> z), ErrorKind::io, "bad vertex at line " + std::to_string(lineno));
            v.emplace_back(x, y, z);
        } else if (tag == "f") {
            int a, b, c;
            require(static_cast<bool>(ls >> a >> b >> c), ErrorKind::io, "bad face at line " + std::to_string(lineno));
            f.push_back({a, b, c, -1});
        } else if (tag == "q") {
            int a, b, c, d;
            require(static_cast<bool>(ls >> a >> b >> c >> d), ErrorKind::io, "bad quad at line " + std::to_string(lineno));
            f.push_back({a, b, c, d});
        } else {
            fail(ErrorKind::io, "unknown record '" + tag + "' at line " + std::to_string(lineno));
        }
    }
    return SurfaceMesh(std::move(v), std::move(f));
}

inline SurfaceMesh read_mesh(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open mesh " + path);
    return read_mesh(is);
}

inline void write_mesh(std::ostream& os, const SurfaceMesh& mesh) {
    os.precision(17);
    for (const auto& x : mesh.vertices()) os << "v " << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
    for (const auto& p : mesh.panels()) {
        if (p.nv == 3)
            os << "f " << p.v[0] << ' ' << p.v[1] << ' ' << p.v[2] << '\n';
        else
            os << "q " << p.v[0] << ' ' << p.v[1] << ' ' << p.v[2] << ' ' << p.v[3] << '\n';
    }
}

} // namespace bubblelab::geom
