#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/quadrature.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace bubblelab {

/// Volumetric domain Omega: a box, a ball or a union of boxes.
class Domain {
public:
    enum class Kind { box, ball, box_union };

    static Domain box(const Vec3& lo, const Vec3& hi) { return box_union({{lo, hi}}, Kind::box); }

    static Domain ball(const Vec3& center, double radius) {
        require(radius > 0.0, ErrorKind::config, "ball radius must be positive");
        Domain d;
        d.kind_ = Kind::ball;
        d.center_ = center;
        d.radius_ = radius;
        d.lo_ = center - Vec3::Constant(radius);
        d.hi_ = center + Vec3::Constant(radius);
        return d;
    }

    static Domain box_union(std::vector<std::pair<Vec3, Vec3>> boxes, Kind kind = Kind::box_union) {
        require(!boxes.empty(), ErrorKind::config, "box union needs at least one box");
        Domain d;
        d.kind_ = kind;
        d.lo_ = boxes[0].first;
        d.hi_ = boxes[0].second;
        for (const auto& [lo, hi] : boxes) {
            require((hi - lo).minCoeff() > 0.0, ErrorKind::config, "box must have positive extent");
            d.lo_ = d.lo_.cwiseMin(lo);
            d.hi_ = d.hi_.cwiseMax(hi);
        }
        d.boxes_ = std::move(boxes);
        d.center_ = 0.5 * (d.lo_ + d.hi_);
        return d;
    }

    Kind kind() const noexcept { return kind_; }
    const Vec3& center() const noexcept { return center_; }
    const Vec3& lo() const noexcept { return lo_; }
    const Vec3& hi() const noexcept { return hi_; }
    double radius() const noexcept { return radius_; }
    const std::vector<std::pair<Vec3, Vec3>>& boxes() const noexcept { return boxes_; }
    double diameter() const { return (hi_ - lo_).norm(); }

    bool contains(const Vec3& x) const {
        if (kind_ == Kind::ball) return (x - center_).squaredNorm() < radius_ * radius_;
        for (const auto& [lo, hi] : boxes_)
            if ((x.array() > lo.array()).all() && (x.array() < hi.array()).all()) return true;
        return false;
    }

    /// Axis-aligned cube of half-side h around c meets Omega.
    bool cube_intersects(const Vec3& c, double h) const {
        if (kind_ == Kind::ball) {
            const Vec3 q = center_.cwiseMax(c - Vec3::Constant(h)).cwiseMin(c + Vec3::Constant(h));
            return (q - center_).squaredNorm() < radius_ * radius_;
        }
        for (const auto& [lo, hi] : boxes_)
            if (((c.array() + h) > lo.array()).all() && ((c.array() - h) < hi.array()).all()) return true;
        return false;
    }

    /// Cube lies inside the closure of Omega.
    bool cube_inside(const Vec3& c, double h) const {
        if (kind_ == Kind::ball) {
            const Vec3 far = (c - center_).cwiseAbs() + Vec3::Constant(h);
            return far.squaredNorm() <= radius_ * radius_;
        }
        // Corners inside some box is enough for a single box; unions are tested on a corner/edge lattice.
        const int n = boxes_.size() == 1 ? 1 : 4;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k) {
                    const Vec3 p = c + h * Vec3(2.0 * i / n - 1.0, 2.0 * j / n - 1.0, 2.0 * k / n - 1.0);
                    bool in = false;
                    for (const auto& [lo, hi] : boxes_)
                        if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all()) in = true;
                    if (!in) return false;
                }
        return true;
    }

    double volume() const {
        if (kind_ == Kind::ball) return 4.0 / 3.0 * pi * radius_ * radius_ * radius_;
        return union_measure().first;
    }

    double boundary_area() const {
        if (kind_ == Kind::ball) return 4.0 * pi * radius_ * radius_;
        return union_measure().second;
    }

    /// Closed outward boundary mesh (ball: icosphere at `level`; box: n x n quads per face).
    geom::SurfaceMesh boundary_mesh(int level) const {
        if (kind_ == Kind::ball) return geom::icosphere(level, radius_, center_);
        require(boxes_.size() == 1, ErrorKind::config, "boundary mesh of a box union is not supported");
        return geom::box_surface(level, boxes_[0].first, boxes_[0].second);
    }

private:
    // Volume and surface area of the box union by coordinate compression.
    std::pair<double, double> union_measure() const {
        std::array<std::vector<double>, 3> cut;
        for (const auto& [lo, hi] : boxes_)
            for (int k = 0; k < 3; ++k) {
                cut[static_cast<std::size_t>(k)].push_back(lo[k]);
                cut[static_cast<std::size_t>(k)].push_back(hi[k]);
            }
        for (auto& c : cut) {
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
        }
        const auto nx = cut[0].size() - 1, ny = cut[1].size() - 1, nz = cut[2].size() - 1;
        std::vector<char> in(nx * ny * nz, 0);
        auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * ny + j) * nx + i; };
        double vol = 0.0;
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j)
                for (std::size_t k = 0; k < nz; ++k) {
                    const Vec3 m(0.5 * (cut[0][i] + cut[0][i + 1]), 0.5 * (cut[1][j] + cut[1][j + 1]),
                                 0.5 * (cut[2][k] + cut[2][k + 1]));
                    if (!contains(m)) continue;
                    in[id(i, j, k)] = 1;
                    vol += (cut[0][i + 1] - cut[0][i]) * (cut[1][j + 1] - cut[1][j]) * (cut[2][k + 1] - cut[2][k]);
                }
        auto inside = [&](long i, long j, long k) {
            if (i < 0 || j < 0 || k < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny) ||
                k >= static_cast<long>(nz))
                return false;
            return in[id(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k))] != 0;
        };
        double area = 0.0;
        for (long i = 0; i < static_cast<long>(nx); ++i)
            for (long j = 0; j < static_cast<long>(ny); ++j)
                for (long k = 0; k < static_cast<long>(nz); ++k) {
                    if (!inside(i, j, k)) continue;
                    const auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j), K = static_cast<std::size_t>(k);
                    const double dx = cut[0][I + 1] - cut[0][I], dy = cut[1][J + 1] - cut[1][J], dz = cut[2][K + 1] - cut[2][K];
                    area += (!inside(i - 1, j, k) + !inside(i + 1, j, k)) * dy * dz;
                    area += (!inside(i, j - 1, k) + !inside(i, j + 1, k)) * dx * dz;
                    area += (!inside(i, j, k - 1) + !inside(i, j, k + 1)) * dx * dy;
                }
        return {vol, area};
    }

    Kind kind_ = Kind::box;
    Vec3 center_ = Vec3::Zero();
    Vec3 lo_ = Vec3::Zero(), hi_ = Vec3::Zero();
    double radius_ = 0.0;
    std::vector<std::pair<Vec3, Vec3>> boxes_;
};

/// Single-chart parametrized surface patch. Parameters (u, v) live in the box
/// [u0,u1] x [v0,v1]; disk charts additionally require u^2 + v^2 <= R^2.
class Chart {
public:
    enum class Kind { plane_rect, plane_disk, graph, sphere };

    static Chart plane_rect(const Vec3& center, const Vec3& normal, double hx, double hy) {
        require(hx > 0 && hy > 0, ErrorKind::config, "rectangle half-extents must be positive");
        Chart c;
        c.kind_ = Kind::plane_rect;
        c.origin_ = center;
        std::tie(c.e1_, c.e2_) = geom::orthonormal_frame(normal);
        c.n_ = normal.normalized();
        c.box_ = {-hx, hx, -hy, hy};
        return c;
    }

    static Chart plane_disk(const Vec3& center, const Vec3& normal, double radius) {
        require(radius > 0, ErrorKind::config, "disk radius must be positive");
        Chart c = plane_rect(center, normal, radius, radius);
        c.kind_ = Kind::plane_disk;
        c.radius_ = radius;
        return c;
    }

    /// z = c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2 over [x0,x1] x [y0,y1].
    static Chart graph(std::array<double, 6> coeffs, double x0, double x1, double y0, double y1) {
        require(x1 > x0 && y1 > y0, ErrorKind::config, "graph chart needs a non-empty parameter box");
        Chart c;
        c.kind_ = Kind::graph;
        c.coef_ = coeffs;
        c.box_ = {x0, x1, y0, y1};
        return c;
    }

    /// Sphere section theta in [theta0, theta1] (polar angle from +z), all phi.
    static Chart sphere(const Vec3& center, double radius, double theta0, double theta1) {
        require(radius > 0 && theta0 >= 0 && theta1 <= pi + 1e-15 && theta1 > theta0, ErrorKind::config,
                "bad sphere chart");
        Chart c;
        c.kind_ = Kind::sphere;
        c.origin_ = center;
        c.radius_ = radius;
        c.box_ = {0.0, 2.0 * pi, theta0, std::min(theta1, pi)};
        return c;
    }

    Kind kind() const noexcept { return kind_; }
    const std::array<double, 4>& param_box() const noexcept { return box_; }
    bool periodic_u() const noexcept { return kind_ == Kind::sphere; }
    double radius() const noexcept { return radius_; }
    const Vec3& origin() const noexcept { return origin_; }
    const Vec3& normal_axis() const noexcept { return n_; }

    /// Full sphere: no boundary at all.
    bool closed() const noexcept { return kind_ == Kind::sphere && box_[2] <= 0.0 && box_[3] >= pi; }

    bool inside(double u, double v) const {
        const double tol = 1e-12 * (1.0 + std::abs(box_[1] - box_[0]) + std::abs(box_[3] - box_[2]));
        if (kind_ == Kind::plane_disk) return u * u + v * v <= radius_ * radius_ * (1.0 + 1e-12);
        if (periodic_u()) return v >= box_[2] - tol && v <= box_[3] + tol;
        return u >= box_[0] - tol && u <= box_[1] + tol && v >= box_[2] - tol && v <= box_[3] + tol;
    }

    Vec3 point(double u, double v) const {
        switch (kind_) {
        case Kind::plane_rect:
        case Kind::plane_disk: return origin_ + u * e1_ + v * e2_;
        case Kind::graph: return Vec3(u, v, f(u, v));
        case Kind::sphere:
            return origin_ + radius_ * Vec3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v));
        }
        return Vec3::Zero();
    }

    Vec3 normal(double u, double v) const {
        switch (kind_) {
        case Kind::plane_rect:
        case Kind::plane_disk: return n_;
        case Kind::graph: {
            const auto [fx, fy] = grad(u, v);
            return Vec3(-fx, -fy, 1.0).normalized();
        }
        case Kind::sphere: return (point(u, v) - origin_) / radius_;
        }
        return Vec3::UnitZ();
    }

    /// Area element sqrt(det g).
    double jacobian(double u, double v) const {
        switch (kind_) {
        case Kind::plane_rect:
        case Kind::plane_disk: return 1.0;
        case Kind::graph: {
            const auto [fx, fy] = grad(u, v);
            return std::sqrt(1.0 + fx * fx + fy * fy);
        }
        case Kind::sphere: return radius_ * radius_ * std::sin(v);
        }
        return 1.0;
    }

    /// |d point / dv|, used to size rows.
    double v_speed(double u, double v) const {
        switch (kind_) {
        case Kind::plane_rect:
        case Kind::plane_disk: return 1.0;
        case Kind::graph: {
            const double fy = grad(u, v).second;
            return std::sqrt(1.0 + fy * fy);
        }
        case Kind::sphere: return radius_;
        }
        return 1.0;
    }

    /// Surface area of the parameter rectangle [ua,ub] x [va,vb] (ignores the disk cut).
    double rect_area(double ua, double ub, double va, double vb) const {
        switch (kind_) {
        case Kind::plane_rect:
        case Kind::plane_disk: return (ub - ua) * (vb - va);
        case Kind::sphere: return radius_ * radius_ * (std::cos(va) - std::cos(vb)) * (ub - ua);
        case Kind::graph: {
            static const auto g = quad::gauss_legendre(8);
            double acc = 0.0;
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                for (std::size_t j = 0; j < g.nodes.size(); ++j) {
                    const double u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * g.nodes[i];
                    const double v = 0.5 * (va + vb) + 0.5 * (vb - va) * g.nodes[j];
                    acc += g.weights[i] * g.weights[j] * jacobian(u, v);
                }
            return 0.25 * (ub - ua) * (vb - va) * acc;
        }
        }
        return 0.0;
    }

    /// Area of the part of a parameter rectangle that lies inside the chart.
    double clipped_area(double ua, double ub, double va, double vb, int samples = 16) const {
        if (kind_ != Kind::plane_disk) {
            double u0 = ua, u1 = ub, v0 = std::max(va, box_[2]), v1 = std::min(vb, box_[3]);
            if (!periodic_u()) {
                u0 = std::max(ua, box_[0]);
                u1 = std::min(ub, box_[1]);
            }
            return (u1 > u0 && v1 > v0) ? rect_area(u0, u1, v0, v1) : 0.0;
        }
        double acc = 0.0;
        const double du = (ub - ua) / samples, dv = (vb - va) / samples;
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j) {
                const double u = ua + (i + 0.5) * du, v = va + (j + 0.5) * dv;
                if (u * u + v * v <= radius_ * radius_) acc += du * dv;
            }
        return acc;
    }

    double total_area() const {
        if (kind_ == Kind::plane_disk) return pi * radius_ * radius_;
        return rect_area(box_[0], box_[1], box_[2], box_[3]);
    }

private:
    double f(double x, double y) const {
        const auto& c = coef_;
        return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    }
    std::pair<double, double> grad(double x, double y) const {
        const auto& c = coef_;
        return {c[1] + 2.0 * c[3] * x + c[4] * y, c[2] + c[4] * x + 2.0 * c[5] * y};
    }

    Kind kind_ = Kind::plane_rect;
    Vec3 origin_ = Vec3::Zero();
    Vec3 e1_ = Vec3::UnitX(), e2_ = Vec3::UnitY(), n_ = Vec3::UnitZ();
    double radius_ = 0.0;
    std::array<double, 4> box_{0, 1, 0, 1};
    std::array<double, 6> coef_{};
};

} // namespace bubblelab
