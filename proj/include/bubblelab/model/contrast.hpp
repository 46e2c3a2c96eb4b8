#pragma once

#include "bubblelab/core/error.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace bubblelab {

/// Background medium, contrast law and regime exponents.
///
/// Bubble density rho_m(a) = C_rho a^{1+gamma} rho0. The bulk modulus follows
/// from the speed ratio tau = kappa_m^2 / kappa0^2, k_m(a) = rho_m k0 / (rho0 tau),
/// so k_m = k_bar a^{1+gamma} with the a-independent k_bar = C_rho k0 / tau.
struct ContrastParams {
    double rho0 = 1.0;
    double k0 = 1.0;
    double C_rho = 1.0;
    double gamma = 1.0;
    double tau = 1.0;
    double omega = 1.0;
    double s = 1.0;
    double t = 0.4;
    std::optional<double> h1;
    std::optional<double> l_M;
    double lambda_K = 0.9; // Hoelder exponent of K
    double eta = 0.5;      // integrability exponent entering the surface error terms
    double l0 = 0.1;       // distance-from-resonance floor

    bool near_resonance() const noexcept { return h1.has_value(); }
    bool gamma_is_one() const noexcept { return std::abs(gamma - 1.0) <= 1e-12; }

    void validate() const {
        require(rho0 > 0 && k0 > 0 && C_rho > 0 && tau > 0 && omega > 0, ErrorKind::config,
                "rho0, k0, C_rho, tau and omega must be positive");
        require(gamma >= 0.0 && gamma <= 1.0, ErrorKind::config, "gamma must lie in [0, 1]");
        require(s >= 0.0 && t >= 0.0, ErrorKind::config, "s and t must be non-negative");
        require(l0 > 0.0, ErrorKind::config, "l0 must be positive");
        require(h1.has_value() == l_M.has_value(), ErrorKind::config, "h1 and l_M must be given together");
        if (h1) {
            require(*h1 > 0.0 && *h1 < 1.0, ErrorKind::config, "h1 must lie in (0, 1)");
            require(*l_M != 0.0, ErrorKind::config, "l_M must be non-zero");
            require(gamma_is_one(), ErrorKind::config, "near-resonance parameters need gamma = 1");
        }
    }

    double kappa0() const { return omega * std::sqrt(rho0 / k0); }
    double kappa_m2() const { return tau * kappa0() * kappa0(); }
    double beta() const { return 1.0 + gamma; }
    double k_bar() const { return C_rho * k0 / tau; }

    /// rho_m < rho0 holds exactly for a below this value.
    double rho_threshold() const { return std::pow(C_rho, -1.0 / beta()); }

    void require_scale(double a) const {
        require(a > 0.0, ErrorKind::contrast, "a must be positive");
        require(a < rho_threshold(), ErrorKind::contrast,
                "a = " + std::to_string(a) + " violates rho_m < rho0 (threshold " + std::to_string(rho_threshold()) + ")");
    }

    double rho_m(double a) const { return C_rho * std::pow(a, beta()) * rho0; }
    double k_m(double a) const { return rho_m(a) * k0 / (rho0 * tau); }
};

} // namespace bubblelab
