#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/core/linalg.hpp"
#include "bubblelab/core/types.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace bubblelab {

struct IncidentWave {
    double kappa0 = 1.0;
    Vec3 theta = Vec3::UnitZ();

    void validate() const {
        require(kappa0 > 0.0, ErrorKind::config, "incident wavenumber must be positive");
        require(std::abs(theta.norm() - 1.0) <= 1e-12, ErrorKind::config, "incident direction must be a unit vector");
    }
    cplx operator()(const Vec3& x) const { return plane_wave(kappa0, theta, x); }
};

/// A[m][m] = 1/C, A[m][l] = Phi(z_l, z_m). Filled symmetrically.
inline CMatrix assemble(const std::vector<Vec3>& centers, cplx C, double kappa0) {
    require(std::abs(C) > 0.0 && std::isfinite(std::abs(C)), ErrorKind::numeric, "scattering coefficient must be finite and non-zero");
    const auto M = static_cast<Eigen::Index>(centers.size());
    CMatrix A(M, M);
    const cplx diag = 1.0 / C;
    for (Eigen::Index m = 0; m < M; ++m) {
        A(m, m) = diag;
        for (Eigen::Index l = m + 1; l < M; ++l) {
            const double r = (centers[static_cast<std::size_t>(l)] - centers[static_cast<std::size_t>(m)]).norm();
            if (!(r > 0.0)) {
                std::ostringstream os;
                os << "coincident bubble centers " << m << " and " << l;
                fail(ErrorKind::singular_kernel, os.str());
            }
            const cplx phi = helmholtz_kernel(kappa0, r);
            A(m, l) = phi;
            A(l, m) = phi;
        }
    }
    return A;
}

struct ChargeSolution {
    CVector Q;
    double residual = 0.0;      // max |A Q - b|
    double cond_estimate = 0.0; // one-norm estimate (dense path), 0 if unavailable
    bool direct = true;
    int iterations = 0;
};

inline CVector incident_rhs(const IncidentWave& inc, const std::vector<Vec3>& centers) {
    CVector b(static_cast<Eigen::Index>(centers.size()));
    for (std::size_t m = 0; m < centers.size(); ++m) b[static_cast<Eigen::Index>(m)] = -inc(centers[m]);
    return b;
}

/// Solves A Q = -u^I(z) by LU with partial pivoting.
inline ChargeSolution solve_charges(const CMatrix& A, const IncidentWave& inc, const std::vector<Vec3>& centers) {
    inc.validate();
    require(A.rows() == static_cast<Eigen::Index>(centers.size()), ErrorKind::numeric, "matrix and centers differ in size");
    const CVector b = incident_rhs(inc, centers);
    DenseLu lu(A);
    if (lu.singular()) fail(ErrorKind::near_singular, "Foldy-Lax matrix is singular (zero pivot)");
    ChargeSolution sol;
    sol.cond_estimate = lu.condition_estimate();
    if (!std::isfinite(sol.cond_estimate) || sol.cond_estimate > 1e15) {
        std::ostringstream os;
        os << "Foldy-Lax matrix is numerically singular, condition estimate " << sol.cond_estimate;
        fail(ErrorKind::near_singular, os.str());
    }
    sol.Q = lu.solve(b);
    sol.residual = (A * sol.Q - b).cwiseAbs().maxCoeff();
    return sol;
}

struct FoldyLaxOptions {
    std::size_t dense_max = 8192;
    GmresOptions gmres{1e-10, 80, 4000};
};

/// Matrix-free product with the Foldy-Lax matrix.
inline void foldy_lax_apply(const std::vector<Vec3>& z, cplx C, double kappa0, const CVector& x, CVector& y) {
    const auto M = z.size();
    y.resize(static_cast<Eigen::Index>(M));
    for (std::size_t m = 0; m < M; ++m) {
        cplx acc = x[static_cast<Eigen::Index>(m)] / C;
        for (std::size_t l = 0; l < M; ++l)
            if (l != m) acc += helmholtz_kernel(kappa0, (z[l] - z[m]).norm()) * x[static_cast<Eigen::Index>(l)];
        y[static_cast<Eigen::Index>(m)] = acc;
    }
}

/// Dense path up to dense_max bubbles, diagonally preconditioned GMRES above.
inline ChargeSolution solve_foldy_lax(const std::vector<Vec3>& centers, cplx C, const IncidentWave& inc,
                                      const FoldyLaxOptions& opt = {}) {
    inc.validate();
    if (centers.size() <= opt.dense_max) return solve_charges(assemble(centers, C, inc.kappa0), inc, centers);
    const CVector b = incident_rhs(inc, centers);
    const CVector diag = CVector::Constant(b.size(), 1.0 / C);
    const auto res = gmres([&](const CVector& x, CVector& y) { foldy_lax_apply(centers, C, inc.kappa0, x, y); }, b, diag, opt.gmres);
    if (!res.converged) fail(ErrorKind::solver, "Foldy-Lax GMRES did not converge: " + describe_history(res));
    ChargeSolution sol;
    sol.Q = res.x;
    sol.direct = false;
    sol.iterations = res.iterations;
    CVector r;
    foldy_lax_apply(centers, C, inc.kappa0, sol.Q, r);
    sol.residual = (r - b).cwiseAbs().maxCoeff();
    return sol;
}

/// u^inf(xhat) = sum_m e^{-i kappa0 xhat.z_m} Q_m.
inline FarField far_field(const CVector& Q, const std::vector<Vec3>& centers, double kappa0, const std::vector<Vec3>& directions) {
    require(Q.size() == static_cast<Eigen::Index>(centers.size()), ErrorKind::numeric, "charges and centers differ in size");
    FarField ff;
    ff.directions = directions;
    ff.values.reserve(directions.size());
    std::vector<cplx> terms(centers.size());
    for (const auto& d : directions) {
        for (std::size_t m = 0; m < centers.size(); ++m) terms[m] = farfield_kernel(kappa0, d, centers[m]) * Q[static_cast<Eigen::Index>(m)];
        ff.values.push_back(pairwise_sum(terms));
    }
    return ff;
}

/// u^s(x) = sum_m Phi(x, z_m) Q_m.
inline cplx near_field(const CVector& Q, const std::vector<Vec3>& centers, double kappa0, const Vec3& x) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < centers.size(); ++m) {
        const double r = (x - centers[m]).norm();
        require(r > 0.0, ErrorKind::singular_kernel, "near field evaluated at a bubble center");
        acc += helmholtz_kernel(kappa0, r) * Q[static_cast<Eigen::Index>(m)];
    }
    return acc;
}

/// min over pairs of cos(kappa0 |z_m - z_j|); reported, never enforced.
inline double cosine_diagnostic(const std::vector<Vec3>& z, double kappa0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < z.size(); ++m)
        for (std::size_t j = m + 1; j < z.size(); ++j) best = std::min(best, std::cos(kappa0 * (z[m] - z[j]).norm()));
    return z.size() < 2 ? 1.0 : best;
}

} // namespace bubblelab
