#pragma once

// Reference solutions for the tests, written independently of the library
// (own Bessel recurrences and Legendre evaluation).

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// j_0..j_nmax at complex z by Miller's backward recurrence, normalised with j_0.
inline std::vector<cplx> sph_j(int nmax, cplx z) {
    std::vector<cplx> j(static_cast<std::size_t>(nmax) + 1);
    if (std::abs(z) < 1e-12) {
        j[0] = 1.0;
        return j;
    }
    const int start = nmax + 30 + static_cast<int>(2.0 * std::abs(z));
    cplx next = 0.0, cur = 1e-300;
    std::vector<cplx> tmp(static_cast<std::size_t>(start) + 2);
    tmp[static_cast<std::size_t>(start) + 1] = next;
    tmp[static_cast<std::size_t>(start)] = cur;
    for (int n = start; n >= 1; --n) {
        const cplx prev = (2.0 * n + 1.0) / z * cur - next;
        next = cur;
        cur = prev;
        tmp[static_cast<std::size_t>(n) - 1] = cur;
        if (std::abs(cur) > 1e250) {
            for (auto& v : tmp) v *= 1e-250;
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    const cplx j0 = std::sin(z) / z;
    const cplx scale = j0 / tmp[0];
    for (int n = 0; n <= nmax; ++n) j[static_cast<std::size_t>(n)] = tmp[static_cast<std::size_t>(n)] * scale;
    return j;
}

/// y_0..y_nmax at real x > 0 by forward recurrence (stable for y).
inline std::vector<double> sph_y(int nmax, double x) {
    std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
    y[0] = -std::cos(x) / x;
    if (nmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int n = 1; n < nmax; ++n) y[static_cast<std::size_t>(n) + 1] = (2.0 * n + 1.0) / x * y[static_cast<std::size_t>(n)] - y[static_cast<std::size_t>(n) - 1];
    return y;
}

/// f_n'(z) = f_{n-1}(z) - (n+1)/z f_n(z), with f_{-1} supplied through f_0' = -f_1.
template <typename T, typename Z>
std::vector<T> derivative(const std::vector<T>& f, Z z) {
    std::vector<T> d(f.size());
    d[0] = -f[1];
    for (std::size_t n = 1; n + 1 < f.size(); ++n) d[n] = f[n - 1] - (static_cast<double>(n) + 1.0) / z * f[n];
    return d;
}

inline std::vector<double> legendre(int nmax, double x) {
    std::vector<double> P(static_cast<std::size_t>(nmax) + 1);
    P[0] = 1.0;
    if (nmax >= 1) P[1] = x;
    for (int n = 1; n < nmax; ++n)
        P[static_cast<std::size_t>(n) + 1] = ((2.0 * n + 1.0) * x * P[static_cast<std::size_t>(n)] - n * P[static_cast<std::size_t>(n) - 1]) / (n + 1.0);
    return P;
}

/// Far field, kernel convention, of u^s = sum i^n (2n+1) b_n h_n(kr) P_n(cos).
inline cplx far_from_coefficients(const std::vector<cplx>& b, double kappa, double cos_angle) {
    const auto P = legendre(static_cast<int>(b.size()) - 1, cos_angle);
    cplx s = 0.0;
    for (std::size_t n = b.size(); n-- > 0;) s += (2.0 * static_cast<double>(n) + 1.0) * b[n] * P[n];
    return -4.0 * pi * I / kappa * s;
}

inline int terms_for(double x) { return 4 * static_cast<int>(std::ceil(x)) + 24; }

/// Sound-soft sphere of radius R.
inline std::vector<cplx> soft_sphere_coefficients(double kappa, double R) {
    const double x = kappa * R;
    const int N = terms_for(x);
    const auto j = sph_j(N + 1, x);
    const auto y = sph_y(N + 1, x);
    std::vector<cplx> b(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const auto k = static_cast<std::size_t>(n);
        b[k] = -j[k] / (j[k] + I * y[k]);
    }
    return b;
}

/// Ball of radius R with interior wavenumber k1 (complex allowed), exterior kappa.
inline std::vector<cplx> penetrable_ball_coefficients(double kappa, cplx k1, double R) {
    const double x = kappa * R;
    const cplx x1 = k1 * R;
    const int N = terms_for(std::max(x, std::abs(x1)));
    const auto j = sph_j(N + 2, x);
    const auto y = sph_y(N + 2, x);
    const auto j1 = sph_j(N + 2, x1);
    const auto dj = derivative(j, cplx(x));
    const auto dy = derivative(y, x);
    const auto dj1 = derivative(j1, x1);
    std::vector<cplx> b(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const auto k = static_cast<std::size_t>(n);
        const cplx h = j[k] + I * y[k], dh = dj[k] + I * dy[k];
        const cplx num = kappa * dj[k] * j1[k] - k1 * dj1[k] * j[k];
        const cplx den = kappa * dh * j1[k] - k1 * dj1[k] * h;
        b[k] = -num / den;
    }
    return b;
}

/// Sphere of radius R with [u] = 0, [du/dr] = sigma u (outside minus inside).
inline std::vector<cplx> transmission_sphere_coefficients(double kappa, double sigma, double R) {
    const double x = kappa * R;
    const int N = terms_for(x);
    const auto j = sph_j(N + 1, x);
    const auto y = sph_y(N + 1, x);
    std::vector<cplx> b(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const auto k = static_cast<std::size_t>(n);
        const cplx h = j[k] + I * y[k];
        b[k] = -I * sigma * kappa * R * R * j[k] * j[k] / (1.0 + I * sigma * kappa * R * R * j[k] * h);
    }
    return b;
}

/// Total field at radius r of the transmission sphere, angle cosine c.
inline cplx transmission_sphere_field(double kappa, double sigma, double R, double r, double c) {
    const auto b = transmission_sphere_coefficients(kappa, sigma, R);
    const int N = static_cast<int>(b.size()) - 1;
    const auto j = sph_j(N, kappa * r);
    const auto y = sph_y(N, kappa * r);
    const auto jR = sph_j(N, kappa * R);
    const auto yR = sph_y(N, kappa * R);
    const auto P = legendre(N, c);
    cplx s = 0.0, in = 1.0;
    for (int n = 0; n <= N; ++n) {
        const auto k = static_cast<std::size_t>(n);
        if (r >= R) {
            s += in * (2.0 * n + 1.0) * (j[k] + b[k] * (j[k] + I * y[k])) * P[k];
        } else {
            const cplx cn = 1.0 + b[k] * (jR[k] + I * yR[k]) / jR[k];
            s += in * (2.0 * n + 1.0) * cn * j[k] * P[k];
        }
        in *= I;
    }
    return s;
}

/// Born far field of a ball with constant potential h V0: -h V0 int_ball e^{i q.y} dy.
inline cplx born_ball(double kappa, double hV0, double R, double cos_angle) {
    const double q = kappa * std::sqrt(std::max(0.0, 2.0 - 2.0 * cos_angle));
    const double qr = q * R;
    const double ft = qr < 1e-3 ? 4.0 * pi * R * R * R / 3.0 * (1.0 - qr * qr / 10.0)
                                : 4.0 * pi * (std::sin(qr) - qr * std::cos(qr)) / (q * q * q);
    return -hV0 * ft;
}

} // namespace oracle
