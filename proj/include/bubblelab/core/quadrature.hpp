#pragma once

#include "bubblelab/core/types.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace bubblelab::quad {

/// Barycentric rule on the reference triangle; weights sum to 1.
struct TriangleRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;
};

inline const TriangleRule& triangle_rule(int degree) {
    static const TriangleRule centroid{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}};
    static const TriangleRule deg2{{{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}},
                                   {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    // Dunavant degree 5, seven points.
    static const TriangleRule deg5 = [] {
        TriangleRule r;
        const double a1 = 0.059715871789770, b1 = 0.470142064105115;
        const double a2 = 0.797426985353087, b2 = 0.101286507323456;
        const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
        r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                  {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
        r.weights = {w0, w1, w1, w1, w2, w2, w2};
        return r;
    }();
    if (degree <= 1) return centroid;
    if (degree == 2) return deg2;
    return deg5;
}

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum to 2
};

inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre g;
    g.nodes.resize(static_cast<std::size_t>(n));
    g.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p1 = x, p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.nodes[static_cast<std::size_t>(i)] = x;
        g.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

/// Nodes/weights mapped to [lo, hi].
inline GaussLegendre gauss_legendre(int n, double lo, double hi) {
    auto g = gauss_legendre(n);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        g.nodes[i] = mid + half * g.nodes[i];
        g.weights[i] *= half;
    }
    return g;
}

/// Legendre polynomials P_0..P_nmax at x.
inline std::vector<double> legendre_all(int nmax, double x) {
    std::vector<double> p(static_cast<std::size_t>(nmax + 1));
    p[0] = 1.0;
    if (nmax >= 1) p[1] = x;
    for (int n = 2; n <= nmax; ++n)
        p[static_cast<std::size_t>(n)] =
            ((2.0 * n - 1.0) * x * p[static_cast<std::size_t>(n - 1)] - (n - 1.0) * p[static_cast<std::size_t>(n - 2)]) / n;
    return p;
}

} // namespace bubblelab::quad
