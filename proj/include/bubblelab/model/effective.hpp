#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/model/bubble.hpp"
#include "bubblelab/model/coefficient.hpp"
#include "bubblelab/model/contrast.hpp"

#include <string_view>

namespace bubblelab {

enum class EffectiveCase { a, b, near };

constexpr std::string_view to_string(EffectiveCase c) noexcept {
    switch (c) {
    case EffectiveCase::a: return "a";
    case EffectiveCase::b: return "b";
    case EffectiveCase::near: return "near";
    }
    return "a";
}

/// Case implied by the parameters: near if h1 is set, b for gamma = 1, a otherwise.
inline EffectiveCase effective_case(const ContrastParams& p) {
    if (p.near_resonance()) return EffectiveCase::near;
    return p.gamma_is_one() ? EffectiveCase::b : EffectiveCase::a;
}

namespace detail {
inline void check_case(const ContrastParams& p, EffectiveCase c) {
    p.validate();
    require(effective_case(p) == c, ErrorKind::wrong_branch,
            "effective case '" + std::string(to_string(c)) + "' inconsistent with the contrast parameters");
}
inline double omega_bar2(const BubbleSpec& b, const ContrastParams& p) { return -8.0 * pi * p.k_bar() / (p.rho0 * b.hat_A()); }
} // namespace detail

/// Refractive term n at a point of Omega (chi_Omega applied by the caller).
inline double effective_index(const ContrastParams& p, const BubbleSpec& b, double K, EffectiveCase c) {
    detail::check_case(p, c);
    require(K >= 0.0, ErrorKind::config, "K must be non-negative");
    const double w2 = p.omega * p.omega, kb = p.k_bar();
    switch (c) {
    case EffectiveCase::a: return w2 * p.rho0 * (1.0 / p.k0 + (K + 1.0) * b.volume_B / kb);
    case EffectiveCase::b: {
        const double wb2 = detail::omega_bar2(b, p);
        return w2 * p.rho0 * (1.0 / p.k0 + (K + 1.0) * b.volume_B / ((1.0 - w2 / wb2) * kb));
    }
    case EffectiveCase::near: {
        const double wb2 = detail::omega_bar2(b, p);
        return wb2 * p.rho0 * (1.0 / p.k0 - (K + 1.0) * b.volume_B / (*p.l_M * kb));
    }
    }
    return 0.0;
}

/// Surface density sigma at a point of Sigma; the jump is [du/dnu] = sigma u.
inline double surface_sigma(const ContrastParams& p, const BubbleSpec& b, double K, EffectiveCase c) {
    detail::check_case(p, c);
    require(K >= 0.0, ErrorKind::config, "K must be non-negative");
    const double w2 = p.omega * p.omega, kb = p.k_bar();
    switch (c) {
    case EffectiveCase::a: return -w2 * (K + 1.0) * b.volume_B * p.rho0 / kb;
    case EffectiveCase::b: {
        const double wb2 = detail::omega_bar2(b, p);
        return -w2 * (K + 1.0) * b.volume_B / (1.0 - w2 / wb2) * p.rho0 / kb;
    }
    case EffectiveCase::near: {
        const double wb2 = detail::omega_bar2(b, p);
        return wb2 * (K + 1.0) * b.volume_B / *p.l_M * p.rho0 / kb;
    }
    }
    return 0.0;
}

/// a-independent coefficient whose (K+1) multiple is the comparator potential:
/// C_lead away from resonance, the closed-form C_bar near it.
inline double comparator_coefficient(const BubbleSpec& b, const ContrastParams& p) {
    p.validate();
    if (p.near_resonance()) return detail::omega_bar2(b, p) * b.volume_B * p.rho0 / (*p.l_M * p.k_bar());
    const double w2 = p.omega * p.omega;
    const double base = -w2 * b.volume_B * p.rho0 / p.k_bar();
    if (!p.gamma_is_one()) return base;
    return base / (1.0 - w2 / detail::omega_bar2(b, p));
}

} // namespace bubblelab
