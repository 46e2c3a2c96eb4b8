#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/quadrature.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/mesh.hpp"

#include <cmath>
#include <vector>

namespace bubblelab {

/// Panel quadrature for the single layer with piecewise-constant densities.
struct LayerOptions {
    double near_factor = 4.0; // closer than factor * diameter: exact 1/r part plus 7-point remainder
    int remainder_degree = 5;
};

namespace detail {

/// int_T 1/|x - y| dA(y) over a flat triangle, exact for any x.
inline double triangle_inv_r(const Vec3& x, const geom::Triangle& t) {
    const Vec3 cr = (t.b - t.a).cross(t.c - t.a);
    const double twice_area = cr.norm();
    require(twice_area > 0.0, ErrorKind::geometry, "degenerate panel");
    const Vec3 n = cr / twice_area;
    const double d = (x - t.a).dot(n);
    const double ad = std::abs(d);
    const Vec3 rho = x - d * n; // projection onto the plane
    const std::array<const Vec3*, 3> v{&t.a, &t.b, &t.c};
    const double scale = std::sqrt(twice_area);
    double total = 0.0;
    for (int e = 0; e < 3; ++e) {
        const Vec3& p = *v[static_cast<std::size_t>(e)];
        const Vec3& q = *v[static_cast<std::size_t>((e + 1) % 3)];
        const Vec3 l = (q - p).normalized();
        const Vec3 u = l.cross(n); // outward in-plane edge normal for counter-clockwise order
        const double t0 = (p - rho).dot(u);
        if (std::abs(t0) <= 1e-14 * scale) continue;
        const double lm = (p - rho).dot(l), lp = (q - rho).dot(l);
        const double R02 = t0 * t0 + d * d;
        const double Rm = std::sqrt(lm * lm + R02), Rp = std::sqrt(lp * lp + R02);
        // log((Rp + lp)/(Rm + lm)) written to stay accurate when l < 0
        const double logterm = lp >= 0.0 && lm >= 0.0 ? std::log((Rp + lp) / (Rm + lm))
                               : lp <= 0.0 && lm <= 0.0 ? std::log((Rm - lm) / (Rp - lp))
                                                         : std::asinh(lp / std::sqrt(R02)) - std::asinh(lm / std::sqrt(R02));
        total += t0 * logterm;
        if (ad > 0.0) total -= ad * (std::atan(t0 * lp / (R02 + ad * Rp)) - std::atan(t0 * lm / (R02 + ad * Rm)));
    }
    return total;
}

/// (e^{i kappa r} - 1) / (4 pi r), bounded, limit i kappa / (4 pi) at r = 0.
inline cplx smooth_remainder(double kappa, double r) {
    if (r * kappa < 1e-6) return cplx(-0.5 * kappa * kappa * r, kappa) / (4.0 * pi);
    return (std::exp(I * (kappa * r)) - 1.0) / (4.0 * pi * r);
}

} // namespace detail

/// int_panel Phi(x, y) ds(y) for panel j, accurate for x on or near the panel.
inline cplx panel_integral(const geom::SurfaceMesh& mesh, std::size_t j, const Vec3& x, double kappa0, const LayerOptions& opt = {}) {
    const auto& rule = quad::triangle_rule(opt.remainder_degree);
    cplx acc = 0.0;
    for (const auto& t : mesh.triangles(j)) {
        acc += detail::triangle_inv_r(x, t) / (4.0 * pi);
        const double area = t.area();
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const Vec3 y = t.point(rule.bary[q]);
            acc += rule.weights[q] * area * detail::smooth_remainder(kappa0, (x - y).norm());
        }
    }
    return acc;
}

/// Self term: int_panel Phi(c, y) ds(y) with c the centroid.
inline cplx self_panel_weight(const geom::SurfaceMesh& mesh, std::size_t j, double kappa0, const LayerOptions& opt = {}) {
    require(mesh[j].area > 0.0, ErrorKind::geometry, "degenerate panel");
    return panel_integral(mesh, j, mesh[j].centroid, kappa0, opt);
}

/// Weight of panel j seen from x: exact near quadrature or centroid rule.
inline cplx layer_weight(const geom::SurfaceMesh& mesh, std::size_t j, const Vec3& x, double kappa0, const LayerOptions& opt = {}) {
    const auto& p = mesh[j];
    const double r = (x - p.centroid).norm();
    if (r < opt.near_factor * p.diameter) return panel_integral(mesh, j, x, kappa0, opt);
    return helmholtz_kernel(kappa0, r) * p.area;
}

/// S_ij = int_{panel j} Phi(c_i, y) ds(y).
inline CMatrix single_layer_matrix(const geom::SurfaceMesh& mesh, double kappa0, const LayerOptions& opt = {}) {
    const auto N = static_cast<Eigen::Index>(mesh.size());
    CMatrix S(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = 0; i < N; ++i)
            S(i, j) = layer_weight(mesh, static_cast<std::size_t>(j), mesh[static_cast<std::size_t>(i)].centroid, kappa0, opt);
    return S;
}

/// (S phi)(x) for a piecewise-constant density.
inline cplx single_layer_eval(const geom::SurfaceMesh& mesh, const CVector& phi, const Vec3& x, double kappa0,
                              const LayerOptions& opt = {}) {
    std::vector<cplx> terms(mesh.size());
    for (std::size_t j = 0; j < mesh.size(); ++j) terms[j] = layer_weight(mesh, j, x, kappa0, opt) * phi[static_cast<Eigen::Index>(j)];
    return pairwise_sum(terms);
}

} // namespace bubblelab
