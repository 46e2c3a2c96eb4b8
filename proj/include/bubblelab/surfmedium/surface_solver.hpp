#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/core/linalg.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/mesh.hpp"
#include "bubblelab/pointscat/foldy_lax.hpp"
#include "bubblelab/surfmedium/layer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bubblelab {

struct SurfaceSolution {
    CVector Y;                   // at panel centroids
    std::vector<double> sigma_h; // h_* sigma per panel
    double residual = 0.0;       // max |(I + S diag(sigma_h)) Y - u^I|
    double cond_estimate = 0.0;
    LayerOptions layer;
};

/// Collocation of Y + h_* int_Sigma Phi sigma Y = u^I at centroids, direct solve.
inline SurfaceSolution assemble_and_solve_surface(const geom::SurfaceMesh& mesh, const std::vector<double>& sigma, double h_star,
                                                  const IncidentWave& inc, const LayerOptions& opt = {}) {
    inc.validate();
    require(sigma.size() == mesh.size(), ErrorKind::config, "sigma and mesh differ in size");
    require(h_star > 0.0, ErrorKind::config, "h_star must be positive");
    for (double s : sigma) require(std::isfinite(s), ErrorKind::config, "sigma must be finite and real");
    const auto N = static_cast<Eigen::Index>(mesh.size());
    SurfaceSolution sol;
    sol.layer = opt;
    sol.sigma_h.resize(mesh.size());
    for (std::size_t j = 0; j < mesh.size(); ++j) sol.sigma_h[j] = h_star * sigma[j];

    CMatrix A = single_layer_matrix(mesh, inc.kappa0, opt);
    for (Eigen::Index j = 0; j < N; ++j) A.col(j) *= sol.sigma_h[static_cast<std::size_t>(j)];
    A.diagonal().array() += 1.0;
    CVector b(N);
    for (Eigen::Index i = 0; i < N; ++i) b[i] = inc(mesh[static_cast<std::size_t>(i)].centroid);

    DenseLu lu(A);
    sol.cond_estimate = lu.singular() ? std::numeric_limits<double>::infinity() : lu.condition_estimate();
    if (lu.singular() || !std::isfinite(sol.cond_estimate) || sol.cond_estimate > 1e14) {
        std::ostringstream os;
        os << "surface system is singular, condition estimate " << sol.cond_estimate;
        fail(ErrorKind::solver, os.str());
    }
    sol.Y = lu.solve(b);
    sol.residual = (A * sol.Y - b).cwiseAbs().maxCoeff();
    return sol;
}

/// Y^inf(xhat) = -h_* sum_j e^{-i kappa0 xhat.c_j} sigma_j Y_j area_j.
inline FarField far_field_surface(const SurfaceSolution& sol, const geom::SurfaceMesh& mesh, double kappa0,
                                  const std::vector<Vec3>& directions) {
    FarField ff;
    ff.directions = directions;
    std::vector<cplx> terms(mesh.size());
    for (const auto& d : directions) {
        for (std::size_t j = 0; j < mesh.size(); ++j)
            terms[j] = farfield_kernel(kappa0, d, mesh[j].centroid) * sol.sigma_h[j] * mesh[j].area * sol.Y[static_cast<Eigen::Index>(j)];
        ff.values.push_back(-pairwise_sum(terms));
    }
    return ff;
}

/// u = u^I - int Phi sigma_h Y.
inline cplx surface_total_field(const SurfaceSolution& sol, const geom::SurfaceMesh& mesh, const IncidentWave& inc, const Vec3& x) {
    CVector w(sol.Y.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = sol.sigma_h[static_cast<std::size_t>(j)] * sol.Y[j];
    return inc(x) - single_layer_eval(mesh, w, x, inc.kappa0, sol.layer);
}

struct JumpReport {
    double eps = 0.0;                 // offset unit used at each sample
    std::size_t samples = 0;
    double jump_u = 0.0;              // max |[u]| / max |u|
    double jump_dn = 0.0;             // max |[du/dnu] - sigma_h u| / derivative scale, mesh orientation
    double jump_dn_flipped = 0.0;     // same with the opposite orientation
    double sign_agreement = 0.0;      // fraction of samples with Re([du/dnu] / u) of the sign of sigma_h
};

struct JumpOptions {
    std::size_t max_samples = 48;
    double eps_factor = 0.5;              // eps = factor * local panel diameter
    std::vector<double> offsets{1.0, 2.0, 3.0}; // multiples of eps on each side
};

namespace detail {

/// Value and slope at 0 of the least-squares quadratic through (x_k, f_k).
inline std::pair<cplx, cplx> fit_limit(const std::vector<double>& x, const std::vector<cplx>& f) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index deg = std::min<Eigen::Index>(2, n - 1);
    Eigen::MatrixXd V(n, deg + 1);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index p = 0; p <= deg; ++p) V(k, p) = std::pow(x[static_cast<std::size_t>(k)], static_cast<double>(p));
    CVector rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) rhs[k] = f[static_cast<std::size_t>(k)];
    const CVector c = V.cast<cplx>().colPivHouseholderQr().solve(rhs);
    return {c[0], deg >= 1 ? c[1] : cplx(0.0)};
}

} // namespace detail

/// Transmission conditions of the representation at sample centroids, by
/// one-sided polynomial extrapolation from offsets along the normal.
inline JumpReport jump_check(const SurfaceSolution& sol, const geom::SurfaceMesh& mesh, const IncidentWave& inc,
                             const JumpOptions& opt = {}) {
    require(!opt.offsets.empty(), ErrorKind::config, "jump_check needs at least one offset");
    JumpReport rep;
    const std::size_t stride = std::max<std::size_t>(1, mesh.size() / std::max<std::size_t>(1, opt.max_samples));
    double umax = 0.0, dscale = 0.0, worst_u = 0.0, worst_dn = 0.0, worst_flip = 0.0;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < mesh.size(); i += stride) {
        const auto& p = mesh[i];
        const double eps = opt.eps_factor * p.diameter;
        rep.eps = std::max(rep.eps, eps);
        std::vector<double> xs;
        std::vector<cplx> plus, minus;
        for (double m : opt.offsets) {
            xs.push_back(m * eps);
            plus.push_back(surface_total_field(sol, mesh, inc, p.centroid + m * eps * p.normal));
            minus.push_back(surface_total_field(sol, mesh, inc, p.centroid - m * eps * p.normal));
        }
        const auto [up, dp] = detail::fit_limit(xs, plus);
        auto [um, dm] = detail::fit_limit(xs, minus);
        dm = -dm; // slope along +normal on the minus side
        const cplx u = 0.5 * (up + um);
        const cplx jn = dp - dm;
        const cplx target = sol.sigma_h[i] * u;
        umax = std::max({umax, std::abs(up), std::abs(um)});
        dscale = std::max({dscale, std::abs(target), std::abs(dp), std::abs(dm)});
        worst_u = std::max(worst_u, std::abs(up - um));
        worst_dn = std::max(worst_dn, std::abs(jn - target));
        worst_flip = std::max(worst_flip, std::abs(-jn - target));
        if (sol.sigma_h[i] != 0.0 && std::abs(u) > 0.0 && (jn / u).real() * sol.sigma_h[i] > 0.0) ++agree;
        ++rep.samples;
    }
    rep.jump_u = umax > 0.0 ? worst_u / umax : worst_u;
    rep.jump_dn = dscale > 0.0 ? worst_dn / dscale : worst_dn;
    rep.jump_dn_flipped = dscale > 0.0 ? worst_flip / dscale : worst_flip;
    rep.sign_agreement = rep.samples ? static_cast<double>(agree) / static_cast<double>(rep.samples) : 0.0;
    return rep;
}

/// Discrete L2(Sigma) norm of Y.
inline double surface_l2_norm(const SurfaceSolution& sol, const geom::SurfaceMesh& mesh) {
    double s = 0.0;
    for (std::size_t j = 0; j < mesh.size(); ++j) s += mesh[j].area * std::norm(sol.Y[static_cast<Eigen::Index>(j)]);
    return std::sqrt(s);
}

inline void write_surface_solution_csv(const std::string& path, const SurfaceSolution& sol, const geom::SurfaceMesh& mesh) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path);
    os << "panel,x,y,z,area,sigma_h,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        const auto& c = mesh[j].centroid;
        const cplx y = sol.Y[static_cast<Eigen::Index>(j)];
        os << j << ',' << c.x() << ',' << c.y() << ',' << c.z() << ',' << mesh[j].area << ',' << sol.sigma_h[j] << ',' << y.real()
           << ',' << y.imag() << '\n';
    }
}

} // namespace bubblelab
