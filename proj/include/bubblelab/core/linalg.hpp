#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <lapacke.h>

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace bubblelab {

/// LU factorization with partial pivoting (LAPACK zgetrf) plus a one-norm
/// condition estimate (zgecon, Hager/Higham power iteration on the factors).
class DenseLu {
public:
    explicit DenseLu(CMatrix a) : lu_(std::move(a)) {
        require(lu_.rows() == lu_.cols(), ErrorKind::numeric, "LU of a non-square matrix");
        const auto n = static_cast<lapack_int>(lu_.rows());
        piv_.resize(static_cast<std::size_t>(n));
        if (n == 0) return;
        const double anorm = lu_.cwiseAbs().colwise().sum().maxCoeff();
        auto* data = reinterpret_cast<lapack_complex_double*>(lu_.data());
        const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, data, n, piv_.data());
        require(info >= 0, ErrorKind::numeric, "zgetrf: illegal argument");
        if (info > 0) {
            singular_ = true;
            cond_ = std::numeric_limits<double>::infinity();
            return;
        }
        double rcond = 0.0;
        const lapack_int cinfo = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, data, n, anorm, &rcond);
        require(cinfo == 0, ErrorKind::numeric, "zgecon failed");
        cond_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    }

    bool singular() const noexcept { return singular_; }
    double condition_estimate() const noexcept { return cond_; }
    Eigen::Index size() const noexcept { return lu_.rows(); }

    CVector solve(const CVector& b) const {
        require(!singular_, ErrorKind::near_singular, "solve with a singular factorization");
        require(b.size() == lu_.rows(), ErrorKind::numeric, "right-hand side has wrong length");
        CVector x = b;
        const auto n = static_cast<lapack_int>(lu_.rows());
        if (n == 0) return x;
        const lapack_int info = LAPACKE_zgetrs(
            LAPACK_COL_MAJOR, 'N', n, 1, reinterpret_cast<const lapack_complex_double*>(lu_.data()), n,
            piv_.data(), reinterpret_cast<lapack_complex_double*>(x.data()), n);
        require(info == 0, ErrorKind::numeric, "zgetrs failed");
        return x;
    }

private:
    CMatrix lu_;
    std::vector<lapack_int> piv_;
    double cond_ = 1.0;
    bool singular_ = false;
};

struct GmresOptions {
    double rel_tol = 1e-10;
    int restart = 60;
    int max_iterations = 3000;
};

struct GmresResult {
    CVector x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    std::vector<double> history;
};

using LinearOperator = std::function<void(const CVector& in, CVector& out)>;

/// Restarted GMRES with right Jacobi preconditioning; the reported residual
/// is the true unpreconditioned ||b - A x|| / ||b|| recomputed at each restart.
inline GmresResult gmres(const LinearOperator& apply, const CVector& b, const CVector& diagonal,
                         const GmresOptions& opt = {}, const CVector* x0 = nullptr) {
    const Eigen::Index n = b.size();
    GmresResult res;
    res.x = x0 ? *x0 : CVector::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        res.x.setZero();
        res.converged = true;
        return res;
    }
    CVector inv_diag(n);
    for (Eigen::Index i = 0; i < n; ++i)
        inv_diag[i] = std::abs(diagonal[i]) > 0.0 ? 1.0 / diagonal[i] : cplx(1.0);

    const int m = opt.restart;
    CVector tmp(n), w(n);
    auto residual = [&](CVector& r) {
        apply(res.x, tmp);
        r = b - tmp;
    };

    CVector r(n);
    residual(r);
    double rnorm = r.norm();
    res.relative_residual = rnorm / bnorm;
    res.history.push_back(res.relative_residual);

    while (res.relative_residual > opt.rel_tol && res.iterations < opt.max_iterations) {
        std::vector<CVector> v;
        v.reserve(static_cast<std::size_t>(m + 1));
        v.push_back(r / rnorm);
        CMatrix h = CMatrix::Zero(m + 1, m);
        std::vector<cplx> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
        CVector g = CVector::Zero(m + 1);
        g[0] = rnorm;
        int k = 0;
        for (; k < m && res.iterations < opt.max_iterations; ++k, ++res.iterations) {
            CVector z = inv_diag.cwiseProduct(v[static_cast<std::size_t>(k)]);
            apply(z, w);
            for (int j = 0; j <= k; ++j) {
                h(j, k) = v[static_cast<std::size_t>(j)].dot(w);
                w -= h(j, k) * v[static_cast<std::size_t>(j)];
            }
            const double wn = w.norm();
            h(k + 1, k) = wn;
            for (int j = 0; j < k; ++j) {
                const cplx t = std::conj(cs[static_cast<std::size_t>(j)]) * h(j, k) +
                               std::conj(sn[static_cast<std::size_t>(j)]) * h(j + 1, k);
                h(j + 1, k) = -sn[static_cast<std::size_t>(j)] * h(j, k) + cs[static_cast<std::size_t>(j)] * h(j + 1, k);
                h(j, k) = t;
            }
            const double denom = std::hypot(std::abs(h(k, k)), std::abs(h(k + 1, k)));
            cs[static_cast<std::size_t>(k)] = denom > 0 ? h(k, k) / denom : cplx(1.0);
            sn[static_cast<std::size_t>(k)] = denom > 0 ? h(k + 1, k) / denom : cplx(0.0);
            h(k, k) = denom;
            h(k + 1, k) = 0.0;
            g[k + 1] = -sn[static_cast<std::size_t>(k)] * g[k];
            g[k] = std::conj(cs[static_cast<std::size_t>(k)]) * g[k];
            res.history.push_back(std::abs(g[k + 1]) / bnorm);
            if (wn == 0.0 || std::abs(g[k + 1]) / bnorm <= opt.rel_tol * 0.5) {
                ++k;
                ++res.iterations;
                break;
            }
            v.push_back(w / wn);
        }
        CVector y = CVector::Zero(k);
        for (int i = k - 1; i >= 0; --i) {
            cplx acc = g[i];
            for (int j = i + 1; j < k; ++j) acc -= h(i, j) * y[j];
            y[i] = acc / h(i, i);
        }
        CVector update = CVector::Zero(n);
        for (int j = 0; j < k; ++j) update += y[j] * v[static_cast<std::size_t>(j)];
        res.x += inv_diag.cwiseProduct(update);
        residual(r);
        rnorm = r.norm();
        res.relative_residual = rnorm / bnorm;
        if (!std::isfinite(res.relative_residual)) break;
    }
    res.converged = res.relative_residual <= opt.rel_tol;
    return res;
}

inline std::string describe_history(const GmresResult& r, std::size_t every = 10) {
    std::ostringstream os;
    os << "iterations=" << r.iterations << " final_rel_residual=" << r.relative_residual << " log:";
    for (std::size_t i = 0; i < r.history.size(); i += every) os << ' ' << r.history[i];
    return os.str();
}

} // namespace bubblelab
