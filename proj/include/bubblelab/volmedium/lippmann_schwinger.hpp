#pragma once

#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/core/linalg.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/pointscat/foldy_lax.hpp"
#include "bubblelab/volmedium/fft_convolution.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <string>
#include <vector>

namespace bubblelab {

/// Uniform voxel grid over a domain's bounding box; cells whose center lies in
/// Omega form the unknowns.
struct VoxelGrid {
    Vec3 origin = Vec3::Zero(); // corner of cell (0,0,0)
    double g = 0.0;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<int> active;    // linear index of each unknown
    std::vector<Vec3> centers;  // center of each unknown
    std::vector<int> slot;      // linear index -> unknown (-1 outside)
    double symmetric_difference = 0.0; // volume of cells cut by the boundary (upper bound)
    double symmetric_difference_bound = 0.0; // 3 g area(dOmega)

    std::size_t size() const noexcept { return active.size(); }
    double cell_volume() const { return g * g * g; }

    std::size_t linear(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * dims[1] + static_cast<std::size_t>(j)) * dims[0] + static_cast<std::size_t>(i);
    }
    Vec3 center_of(int i, int j, int k) const { return origin + g * Vec3(i + 0.5, j + 0.5, k + 0.5); }
};

/// Grid of side g centered on the domain's bounding box.
inline VoxelGrid make_voxel_grid(const Domain& dom, double g) {
    require(g > 0.0, ErrorKind::config, "voxel side must be positive");
    VoxelGrid vg;
    vg.g = g;
    const Vec3 ext = dom.hi() - dom.lo();
    for (int k = 0; k < 3; ++k) vg.dims[static_cast<std::size_t>(k)] = std::max(1, static_cast<int>(std::ceil(ext[k] / g - 1e-9)));
    const Vec3 span = g * Vec3(vg.dims[0], vg.dims[1], vg.dims[2]);
    vg.origin = 0.5 * (dom.lo() + dom.hi()) - 0.5 * span;
    vg.slot.assign(static_cast<std::size_t>(vg.dims[0]) * vg.dims[1] * vg.dims[2], -1);
    for (int k = 0; k < vg.dims[2]; ++k)
        for (int j = 0; j < vg.dims[1]; ++j)
            for (int i = 0; i < vg.dims[0]; ++i) {
                const Vec3 c = vg.center_of(i, j, k);
                if (dom.cube_intersects(c, 0.5 * g) && !dom.cube_inside(c, 0.5 * g)) vg.symmetric_difference += g * g * g;
                if (!dom.contains(c)) continue;
                vg.slot[vg.linear(i, j, k)] = static_cast<int>(vg.active.size());
                vg.active.push_back(static_cast<int>(vg.linear(i, j, k)));
                vg.centers.push_back(c);
            }
    vg.symmetric_difference_bound = 3.0 * g * dom.boundary_area();
    require(!vg.active.empty(), ErrorKind::config, "voxel grid has no cell inside the domain");
    return vg;
}

/// V0 per active cell and the multiplier h_*.
struct VolumePotential {
    std::vector<double> V0;
    double h_star = 1.0;

    void validate(const VoxelGrid& g) const {
        require(V0.size() == g.size(), ErrorKind::config, "potential and grid differ in size");
        require(h_star > 0.0, ErrorKind::config, "h_star must be positive");
        for (double v : V0) require(std::isfinite(v), ErrorKind::config, "potential must be finite");
    }
};

inline VolumePotential constant_potential(const VoxelGrid& g, double V0, double h_star = 1.0) {
    return {std::vector<double>(g.size(), V0), h_star};
}

/// int_cell Phi(z_c, y) dy: equal-volume ball for 1/(4 pi r), plus the midpoint
/// value i kappa / (4 pi) of the smooth remainder times g^3.
inline cplx self_cell_weight(double g, double kappa0) {
    require(g > 0.0, ErrorKind::config, "cell side must be positive");
    const double r_eq = std::cbrt(3.0 * g * g * g / (4.0 * pi));
    return cplx(0.5 * r_eq * r_eq, 0.0) + I * kappa0 * g * g * g / (4.0 * pi);
}

struct LSOptions {
    std::size_t dense_max = 4096;
    std::size_t max_cells = 64u * 64u * 64u;
    GmresOptions gmres{1e-10, 80, 2000};
};

struct LSSolution {
    CVector Y;
    double residual = 0.0; // max |(I + h W V) Y - u^I|
    double h_star = 1.0;
    bool direct = true;
    int iterations = 0;
    std::string log;
};

namespace detail {

/// Operator Y -> Y + h_* W (V0 Y) on a voxel grid, dense or FFT based.
class LSOperator {
public:
    LSOperator(const VoxelGrid& g, const VolumePotential& pot, double kappa0, bool dense)
        : g_(g), pot_(pot), kappa_(kappa0), self_(self_cell_weight(g.g, kappa0)) {
        const double vol = g.cell_volume();
        if (dense) {
            const auto N = static_cast<Eigen::Index>(g.size());
            A_.resize(N, N);
            for (Eigen::Index i = 0; i < N; ++i)
                for (Eigen::Index j = 0; j < N; ++j) {
                    const cplx w = i == j ? self_ : helmholtz_kernel(kappa0, g.centers[static_cast<std::size_t>(i)],
                                                                     g.centers[static_cast<std::size_t>(j)]) * vol;
                    A_(i, j) = (i == j ? 1.0 : 0.0) + pot.h_star * w * pot.V0[static_cast<std::size_t>(j)];
                }
        } else {
            const double gg = g.g;
            conv_ = std::make_unique<GridConvolution>(g.dims, [&](int di, int dj, int dk) -> cplx {
                if (di == 0 && dj == 0 && dk == 0) return self_;
                return helmholtz_kernel(kappa0, gg * std::sqrt(double(di * di + dj * dj + dk * dk))) * vol;
            });
            full_.resize(g.slot.size());
        }
    }

    bool dense() const { return !conv_; }
    const CMatrix& matrix() const { return A_; }

    void apply(const CVector& x, CVector& y) {
        if (dense()) {
            y = A_ * x;
            return;
        }
        std::fill(full_.begin(), full_.end(), cplx(0.0));
        for (std::size_t n = 0; n < g_.size(); ++n)
            full_[static_cast<std::size_t>(g_.active[n])] = pot_.V0[n] * x[static_cast<Eigen::Index>(n)];
        conv_->apply(full_, out_);
        y.resize(x.size());
        for (std::size_t n = 0; n < g_.size(); ++n)
            y[static_cast<Eigen::Index>(n)] = x[static_cast<Eigen::Index>(n)] + pot_.h_star * out_[static_cast<std::size_t>(g_.active[n])];
    }

    CVector diagonal() const {
        CVector d(static_cast<Eigen::Index>(g_.size()));
        for (std::size_t n = 0; n < g_.size(); ++n) d[static_cast<Eigen::Index>(n)] = 1.0 + pot_.h_star * self_ * pot_.V0[n];
        return d;
    }

private:
    const VoxelGrid& g_;
    const VolumePotential& pot_;
    double kappa_;
    cplx self_;
    CMatrix A_;
    std::unique_ptr<GridConvolution> conv_;
    std::vector<cplx> full_, out_;
};

} // namespace detail

/// Collocation of Y + h_* int Phi V0 Y = u^I at cell centers.
inline LSSolution assemble_and_solve(const VoxelGrid& g, const VolumePotential& pot, const IncidentWave& inc,
                                     const LSOptions& opt = {}) {
    inc.validate();
    pot.validate(g);
    require(g.size() <= opt.max_cells, ErrorKind::config,
            "voxel grid has " + std::to_string(g.size()) + " cells, above the configured maximum");
    const auto N = static_cast<Eigen::Index>(g.size());
    CVector b(N);
    for (Eigen::Index i = 0; i < N; ++i) b[i] = inc(g.centers[static_cast<std::size_t>(i)]);

    LSSolution sol;
    sol.h_star = pot.h_star;
    const bool dense = g.size() <= opt.dense_max;
    detail::LSOperator op(g, pot, inc.kappa0, dense);
    if (dense) {
        DenseLu lu(op.matrix());
        require(!lu.singular(), ErrorKind::solver, "Lippmann-Schwinger matrix is singular");
        sol.Y = lu.solve(b);
        sol.log = "dense LU, condition estimate " + std::to_string(lu.condition_estimate());
    } else {
        const auto res = gmres([&](const CVector& x, CVector& y) { op.apply(x, y); }, b, op.diagonal(), opt.gmres);
        sol.log = describe_history(res);
        if (!res.converged || res.relative_residual > 1e-8)
            fail(ErrorKind::solver, "Lippmann-Schwinger GMRES did not converge: " + sol.log);
        sol.Y = res.x;
        sol.direct = false;
        sol.iterations = res.iterations;
    }
    CVector r;
    op.apply(sol.Y, r);
    sol.residual = (r - b).cwiseAbs().maxCoeff();
    return sol;
}

/// Y^inf(xhat) = -h_* sum_j e^{-i kappa0 xhat.z_j} V0_j Y_j g^3.
inline FarField far_field_volume(const LSSolution& sol, const VolumePotential& pot, const VoxelGrid& g, double kappa0,
                                 const std::vector<Vec3>& directions) {
    FarField ff;
    ff.directions = directions;
    const double vol = g.cell_volume();
    std::vector<cplx> terms(g.size());
    for (const auto& d : directions) {
        for (std::size_t j = 0; j < g.size(); ++j)
            terms[j] = farfield_kernel(kappa0, d, g.centers[j]) * pot.V0[j] * sol.Y[static_cast<Eigen::Index>(j)];
        ff.values.push_back(-pot.h_star * vol * pairwise_sum(terms));
    }
    return ff;
}

/// u = u^I - h_* int Phi V0 Y, by the same quadrature (self weight inside a cell).
inline cplx total_field_eval(const LSSolution& sol, const VolumePotential& pot, const VoxelGrid& g, const IncidentWave& inc,
                             const Vec3& x) {
    const double vol = g.cell_volume();
    const cplx self = self_cell_weight(g.g, inc.kappa0);
    std::vector<cplx> terms(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const Vec3 d = x - g.centers[j];
        const cplx w = d.cwiseAbs().maxCoeff() < 0.5 * g.g ? self : helmholtz_kernel(inc.kappa0, d.norm()) * vol;
        terms[j] = w * pot.V0[j] * sol.Y[static_cast<Eigen::Index>(j)];
    }
    return inc(x) - pot.h_star * pairwise_sum(terms);
}

inline void write_volume_solution_csv(const std::string& path, const LSSolution& sol, const VoxelGrid& g) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path);
    os << "cell,x,y,z,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto& c = g.centers[j];
        const cplx y = sol.Y[static_cast<Eigen::Index>(j)];
        os << j << ',' << c.x() << ',' << c.y() << ',' << c.z() << ',' << y.real() << ',' << y.imag() << '\n';
    }
}

} // namespace bubblelab
