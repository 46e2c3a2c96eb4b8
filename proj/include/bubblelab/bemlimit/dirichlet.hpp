#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/core/linalg.hpp"
#include "bubblelab/core/quadrature.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/mesh.hpp"
#include "bubblelab/pointscat/foldy_lax.hpp"
#include "bubblelab/surfmedium/layer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace bubblelab {

struct LayerDensity {
    CVector phi; // per panel
};

struct DirichletSolution {
    LayerDensity density;
    FarField far;
    double residual = 0.0;
    double cond_estimate = 0.0;
    LayerOptions layer;
};

struct DirichletOptions {
    LayerOptions layer;
    double max_condition = 1e10;
};

/// u_D^inf(xhat) = sum_j e^{-i kappa0 xhat.c_j} phi_j area_j.
inline FarField dirichlet_far_field(const LayerDensity& d, const geom::SurfaceMesh& mesh, double kappa0,
                                    const std::vector<Vec3>& directions) {
    FarField ff;
    ff.directions = directions;
    std::vector<cplx> terms(mesh.size());
    for (const auto& x : directions) {
        for (std::size_t j = 0; j < mesh.size(); ++j)
            terms[j] = farfield_kernel(kappa0, x, mesh[j].centroid) * d.phi[static_cast<Eigen::Index>(j)] * mesh[j].area;
        ff.values.push_back(pairwise_sum(terms));
    }
    return ff;
}

/// Solves S phi = -u^I on the mesh (closed boundary or open crack).
inline DirichletSolution solve_dirichlet(const geom::SurfaceMesh& mesh, const IncidentWave& inc, const std::vector<Vec3>& directions,
                                         const DirichletOptions& opt = {}) {
    inc.validate();
    require(mesh.size() > 0, ErrorKind::geometry, "empty mesh");
    const auto N = static_cast<Eigen::Index>(mesh.size());
    const CMatrix S = single_layer_matrix(mesh, inc.kappa0, opt.layer);
    CVector b(N);
    for (Eigen::Index i = 0; i < N; ++i) b[i] = -inc(mesh[static_cast<std::size_t>(i)].centroid);
    DenseLu lu(S);
    DirichletSolution sol;
    sol.layer = opt.layer;
    sol.cond_estimate = lu.singular() ? std::numeric_limits<double>::infinity() : lu.condition_estimate();
    if (!std::isfinite(sol.cond_estimate) || sol.cond_estimate > opt.max_condition) {
        std::ostringstream os;
        os << "single-layer system is near-singular (condition estimate " << sol.cond_estimate << "); kappa0 = " << inc.kappa0
           << " may be an interior Dirichlet eigenvalue, perturb kappa0 slightly";
        fail(ErrorKind::near_singular, os.str());
    }
    sol.density.phi = lu.solve(b);
    sol.residual = (S * sol.density.phi - b).cwiseAbs().maxCoeff();
    sol.far = dirichlet_far_field(sol.density, mesh, inc.kappa0, directions);
    return sol;
}

/// u_D^s(x) = (S phi)(x).
inline cplx dirichlet_scattered(const DirichletSolution& sol, const geom::SurfaceMesh& mesh, double kappa0, const Vec3& x) {
    return single_layer_eval(mesh, sol.density.phi, x, kappa0, sol.layer);
}

/// True if kappa0 r lies within rel_tol of a zero of some j_n (n <= nmax).
inline bool near_sphere_dirichlet_eigenvalue(double kappa0, double radius, double rel_tol = 1e-3, int nmax = 30) {
    const double x = kappa0 * radius;
    for (int n = 0; n <= nmax; ++n) {
        const double h = rel_tol * x;
        const double f0 = std::sph_bessel(static_cast<unsigned>(n), x - h), f1 = std::sph_bessel(static_cast<unsigned>(n), x + h);
        if (f0 == 0.0 || f1 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) return true;
    }
    return false;
}

/// Sound-soft sphere far field, kernel convention e^{-i kappa0 xhat.y}:
/// u^inf = (4 pi i / kappa0) sum_n (2n+1) j_n(kr)/h_n(kr) P_n(xhat.theta)
/// for a sphere centred at the origin.
inline FarField mie_soft_sphere(double kappa0, double radius, const std::vector<Vec3>& directions, const Vec3& theta = Vec3::UnitZ()) {
    require(kappa0 > 0.0 && radius > 0.0, ErrorKind::config, "wavenumber and radius must be positive");
    require(kappa0 * radius <= 50.0, ErrorKind::config, "mie series limited to kappa0 r <= 50");
    const double x = kappa0 * radius;
    const int nmax = 4 * static_cast<int>(std::ceil(x)) + 20;
    std::vector<cplx> ratio(static_cast<std::size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) {
        const double j = std::sph_bessel(static_cast<unsigned>(n), x);
        const double y = std::sph_neumann(static_cast<unsigned>(n), x);
        ratio[static_cast<std::size_t>(n)] = (2.0 * n + 1.0) * j / cplx(j, y);
    }
    FarField ff;
    ff.directions = directions;
    for (const auto& d : directions) {
        const auto P = quad::legendre_all(nmax, std::clamp(d.dot(theta), -1.0, 1.0));
        cplx sum = 0.0;
        for (int n = nmax; n >= 0; --n) sum += ratio[static_cast<std::size_t>(n)] * P[static_cast<std::size_t>(n)];
        ff.values.push_back(4.0 * pi * I / kappa0 * sum);
    }
    return ff;
}

} // namespace bubblelab
