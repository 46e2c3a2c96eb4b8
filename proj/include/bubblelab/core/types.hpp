#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace bubblelab {

using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Outgoing Helmholtz fundamental solution e^{ik r}/(4 pi r).
inline cplx helmholtz_kernel(double kappa, double r) {
    return std::exp(I * (kappa * r)) / (4.0 * pi * r);
}

inline cplx helmholtz_kernel(double kappa, const Vec3& x, const Vec3& y) {
    return helmholtz_kernel(kappa, (x - y).norm());
}

/// Far-field kernel paired with the fundamental solution: e^{-ik xhat.y}.
inline cplx farfield_kernel(double kappa, const Vec3& xhat, const Vec3& y) {
    return std::exp(-I * (kappa * xhat.dot(y)));
}

/// Plane wave e^{ik x.theta}.
inline cplx plane_wave(double kappa, const Vec3& theta, const Vec3& x) {
    return std::exp(I * (kappa * theta.dot(x)));
}

/// Pairwise (tree) summation; result depends only on the input order.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += v[i];
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return v.empty() ? T{} : pairwise_sum(v, 0, v.size());
}

} // namespace bubblelab
