#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/model/bubble.hpp"
#include "bubblelab/model/contrast.hpp"

#include <cmath>
#include <sstream>

namespace bubblelab {

struct MinnaertFrequencies {
    double omega_M2 = 0.0;     // at the given a, physical rho_m and k_m
    double omega_bar_M2 = 0.0; // a-independent limit, uses k_bar
};

/// omega_M^2 = 8 pi k_m / ((rho_m - rho0) a^2 hatA_ref), omega_bar_M^2 = -8 pi k_bar / (rho0 hatA_ref).
inline MinnaertFrequencies minnaert(const BubbleSpec& bubble, const ContrastParams& p, double a) {
    p.validate();
    require(a > 0.0, ErrorKind::contrast, "a must be positive");
    const double rho_m = p.rho_m(a);
    require(rho_m < p.rho0, ErrorKind::contrast, "contrast violation: rho_m >= rho0");
    const double hatA = bubble.hat_A();
    MinnaertFrequencies f;
    f.omega_M2 = 8.0 * pi * p.k_m(a) / ((rho_m - p.rho0) * a * a * hatA);
    f.omega_bar_M2 = -8.0 * pi * p.k_bar() / (p.rho0 * hatA);
    return f;
}

/// Frequency placing the bubble at 1 - omega_M^2/omega^2 = l_M a^{h1}.
inline double near_resonance_omega(const BubbleSpec& bubble, const ContrastParams& p, double a) {
    require(p.near_resonance(), ErrorKind::config, "near-resonance frequency needs h1 and l_M");
    const double shift = *p.l_M * std::pow(a, *p.h1);
    require(shift < 1.0, ErrorKind::contrast, "l_M a^h1 must be below 1");
    return std::sqrt(minnaert(bubble, p, a).omega_M2 / (1.0 - shift));
}

/// C = kappa_m^2 |D| / (rho_m/(rho_m - rho0) - kappa_m^2 hatA / (8 pi)) without any regime gate.
inline double raw_coefficient(const BubbleSpec& bubble, const ContrastParams& p, double a) {
    p.require_scale(a);
    const double rho_m = p.rho_m(a);
    const double km2 = p.kappa_m2();
    const double D = a * a * a * bubble.volume_B;
    const double hatA = a * a * bubble.hat_A();
    const double denom = rho_m / (rho_m - p.rho0) - km2 * hatA / (8.0 * pi);
    require(std::abs(denom) >= 1e-12 * std::abs(rho_m / (rho_m - p.rho0)), ErrorKind::resonance,
            "scattering coefficient denominator vanishes (exact resonance)");
    return km2 * D / denom;
}

struct CLead {
    double value = 0.0;
    double remainder_order = 0.0; // C / a^{2-gamma} = value + O(a^order)
};

inline CLead c_lead(const BubbleSpec& bubble, const ContrastParams& p, double a) {
    require(!p.near_resonance(), ErrorKind::wrong_branch, "C_lead is defined away from resonance only");
    p.validate();
    p.require_scale(a);
    const double w2 = p.omega * p.omega;
    const double base = -w2 * bubble.volume_B * p.rho0 / p.k_bar();
    if (!p.gamma_is_one()) return {base, 1.0 - p.gamma};
    const double wb2 = minnaert(bubble, p, a).omega_bar_M2;
    return {base / (1.0 - w2 / wb2), 2.0};
}

enum class CoefficientSign { negative, positive };

struct ScatteringCoefficient {
    cplx C{0.0, 0.0};
    double C_bar = 0.0;    // C / a^exponent; near resonance this is the a-independent closed form
    double C_lead = 0.0;   // away-from-resonance leading value (0 near resonance)
    double omega_M2 = 0.0;
    double omega_bar_M2 = 0.0;
    double hat_A = 0.0;    // a^2 hatA_ref
    double exponent = 0.0; // C = Theta(a^exponent)
    CoefficientSign sign = CoefficientSign::negative;
};

inline ScatteringCoefficient scattering_coefficient(const BubbleSpec& bubble, const ContrastParams& p, double a) {
    p.validate();
    p.require_scale(a);
    const auto mf = minnaert(bubble, p, a);
    const double w2 = p.omega * p.omega;
    const double detune = 1.0 - mf.omega_M2 / w2;
    if (p.near_resonance()) {
        const double implied = detune / std::pow(a, *p.h1);
        if (std::abs(implied - *p.l_M) > 0.1 * std::abs(*p.l_M)) {
            std::ostringstream os;
            os << "near-resonance gate: implied l_M = " << implied << " differs from configured " << *p.l_M
               << " by more than 10%";
            fail(ErrorKind::resonance, os.str());
        }
    } else if (p.gamma_is_one()) {
        if (std::abs(detune) < p.l0) {
            std::ostringstream os;
            os << "frequency too close to resonance: |1 - omega_M^2/omega^2| = " << std::abs(detune) << " < l0 = " << p.l0;
            fail(ErrorKind::resonance, os.str());
        }
    }
    ScatteringCoefficient sc;
    const double C = raw_coefficient(bubble, p, a);
    sc.C = C;
    sc.omega_M2 = mf.omega_M2;
    sc.omega_bar_M2 = mf.omega_bar_M2;
    sc.hat_A = a * a * bubble.hat_A();
    sc.sign = C < 0.0 ? CoefficientSign::negative : CoefficientSign::positive;
    if (p.near_resonance()) {
        sc.exponent = 1.0 - *p.h1;
        sc.C_bar = mf.omega_bar_M2 * bubble.volume_B * p.rho0 / (*p.l_M * p.k_bar());
    } else {
        sc.exponent = 2.0 - p.gamma;
        sc.C_bar = C / std::pow(a, sc.exponent);
        sc.C_lead = c_lead(bubble, p, a).value;
    }
    return sc;
}

} // namespace bubblelab
