#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/model/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace bubblelab {

enum class Regime {
    Low,
    MediumVolumetricA,
    MediumVolumetricB,
    MediumNearResonance,
    MediumSurfaceA,
    MediumSurfaceB,
    MediumSurfaceNearResonance,
    High,
    Unclassified,
};

constexpr std::string_view to_string(Regime r) noexcept {
    switch (r) {
    case Regime::Low: return "Low";
    case Regime::MediumVolumetricA: return "MediumVolumetricA";
    case Regime::MediumVolumetricB: return "MediumVolumetricB";
    case Regime::MediumNearResonance: return "MediumNearResonance";
    case Regime::MediumSurfaceA: return "MediumSurfaceA";
    case Regime::MediumSurfaceB: return "MediumSurfaceB";
    case Regime::MediumSurfaceNearResonance: return "MediumSurfaceNearResonance";
    case Regime::High: return "High";
    case Regime::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

struct Condition {
    std::string group; // which hypothesis set the inequality belongs to
    std::string name;
    bool value = false;
};

struct RegimeReport {
    Regime regime = Regime::Unclassified;         // volumetric distribution
    Regime surface_regime = Regime::Unclassified; // surface distribution
    std::vector<Condition> satisfied;
    double scale_of_C = 0.0; // C = Theta(a^e)
    double s_star = 0.0;
    bool near_resonance = false;
    ContrastParams params;

    /// Conjunction of every condition in a group.
    bool holds(std::string_view group) const {
        bool any = false;
        for (const auto& c : satisfied)
            if (c.group == group) {
                any = true;
                if (!c.value) return false;
            }
        return any;
    }

    bool value(std::string_view group, std::string_view name) const {
        for (const auto& c : satisfied)
            if (c.group == group && c.name == name) return c.value;
        fail(ErrorKind::config, "no condition '" + std::string(name) + "' in group '" + std::string(group) + "'");
    }
};

namespace regime_groups {
inline constexpr std::string_view expansion = "expansion_validity";
inline constexpr std::string_view inv_1a = "invertibility_1a";
inline constexpr std::string_view inv_1b = "invertibility_1b";
inline constexpr std::string_view inv_2a = "invertibility_2a";
inline constexpr std::string_view inv_2b = "invertibility_2b";
inline constexpr std::string_view low_small_gamma = "low_gamma_lt_1";
inline constexpr std::string_view low_away = "low_away";
inline constexpr std::string_view low_near = "low_near";
inline constexpr std::string_view medium_a = "medium_a";
inline constexpr std::string_view medium_b = "medium_b";
inline constexpr std::string_view medium_near = "medium_near";
inline constexpr std::string_view high_volumetric = "high_volumetric";
inline constexpr std::string_view high_surface = "high_surface";
} // namespace regime_groups

/// Evaluates every hypothesis inequality and derives the regimes from the ledger.
inline RegimeReport classify_regime(const ContrastParams& p, double eq_tol = 1e-9) {
    p.validate();
    namespace g = regime_groups;
    RegimeReport rep;
    rep.params = p;
    rep.near_resonance = p.near_resonance();
    auto add = [&](std::string_view group, std::string name, bool v) { rep.satisfied.push_back({std::string(group), std::move(name), v}); };

    const double s = p.s, t = p.t, gm = p.gamma, lam = p.lambda_K;
    const bool g1 = p.gamma_is_one();
    const bool near = p.near_resonance();
    const bool away = !near;
    const double h1 = near ? *p.h1 : 0.0;
    const double lM = near ? *p.l_M : 0.0;

    // Point-interaction expansion validity.
    add(g::expansion, "0 <= t < 1/2", t >= 0 && t < 0.5);
    add(g::expansion, "0 <= s <= 3/2", s >= 0 && s <= 1.5);
    add(g::expansion, "0 <= gamma <= 1", gm >= 0 && gm <= 1);
    add(g::expansion, "s + gamma <= 2", s + gm <= 2 + eq_tol);
    add(g::expansion, "t >= s/3", t >= s / 3 - eq_tol);
    if (near && lM < 0) add(g::expansion, "s + h1 <= 1 (l_M < 0)", s + h1 <= 1 + eq_tol);
    if (near && lM > 0) {
        add(g::expansion, "t + h1 <= 1 (l_M > 0)", t + h1 <= 1 + eq_tol);
        add(g::expansion, "s + h1 < min{3/2 - t, 2 - h1} (l_M > 0)", s + h1 < std::min(1.5 - t, 2 - h1));
    }

    // Invertibility of the algebraic system.
    add(g::inv_1a, "gamma < 1 or (gamma = 1 and away)", !g1 || away);
    add(g::inv_1a, "gamma + s <= 2", gm + s <= 2 + eq_tol);
    add(g::inv_1a, "s/3 <= t <= 1", t >= s / 3 - eq_tol && t <= 1);
    add(g::inv_1b, "gamma = 1, near, l_M < 0", g1 && near && lM < 0);
    add(g::inv_1b, "s/3 <= t <= 1", t >= s / 3 - eq_tol && t <= 1);
    add(g::inv_1b, "1 - h1 - s >= 0", near && 1 - h1 - s >= -eq_tol);
    add(g::inv_2a, "gamma = 1, near, l_M > 0", g1 && near && lM > 0);
    add(g::inv_2a, "0 <= t <= 1 - h1", near && t <= 1 - h1 + eq_tol);
    add(g::inv_2a, "s <= 1", s <= 1 + eq_tol);
    add(g::inv_2b, "gamma = 1, near, l_M > 0", g1 && near && lM > 0);
    add(g::inv_2b, "s/3 <= t <= 1", t >= s / 3 - eq_tol && t <= 1);
    add(g::inv_2b, "1 - h1 - s >= 0", near && 1 - h1 - s >= -eq_tol);

    // Vanishing-effect conditions.
    add(g::low_small_gamma, "gamma < 1", !g1);
    add(g::low_small_gamma, "gamma + s < 2", gm + s < 2 - eq_tol);
    add(g::low_away, "gamma = 1 and away", g1 && away);
    add(g::low_away, "s < 1", s < 1 - eq_tol);
    add(g::low_near, "gamma = 1 and near", g1 && near);
    add(g::low_near, "s + h1 < 1", near && s + h1 < 1 - eq_tol);

    // Medium regimes (identical hypotheses for volume and surface).
    add(g::medium_a, "0 <= t < 1/2", t >= 0 && t < 0.5);
    add(g::medium_a, "gamma < 1", !g1);
    add(g::medium_a, "gamma + s = 2", std::abs(gm + s - 2) <= eq_tol);
    add(g::medium_b, "0 <= t < 1/2", t >= 0 && t < 0.5);
    add(g::medium_b, "gamma = 1", g1);
    add(g::medium_b, "s = 1", std::abs(s - 1) <= eq_tol);
    add(g::medium_b, "away from resonance", away);
    add(g::medium_near, "gamma = 1 and near", g1 && near);
    add(g::medium_near, "l_M != 0", near && lM != 0);
    add(g::medium_near, "0 < h1 < 1", near && h1 > 0 && h1 < 1);
    add(g::medium_near, "s = 1 - h1", near && std::abs(s - (1 - h1)) <= eq_tol);
    add(g::medium_near, "s/3 <= t < min{1 - h1, 1/2}", near && t >= s / 3 - eq_tol && t < std::min(1 - h1, 0.5));

    // High regime: 0 < 1-h1 < s <= 3t < min{3/2 - t - h1, (1 + c lambda)(1 - h1)}, h1 < 1/6.
    auto add_high = [&](std::string_view group, double c, const std::string& label) {
        add(group, "gamma = 1 and near", g1 && near);
        add(group, "l_M > 0", near && lM > 0);
        add(group, "0 < 1 - h1", near && 1 - h1 > 0);
        add(group, "1 - h1 < s", near && 1 - h1 < s);
        add(group, "s <= 3t", s <= 3 * t + eq_tol);
        add(group, "3t < 3/2 - t - h1", near && 3 * t < 1.5 - t - h1);
        add(group, "3t < " + label + "(1 - h1)", near && 3 * t < (1 + c * lam) * (1 - h1));
        add(group, "h1 < 1/6", near && h1 < 1.0 / 6.0);
    };
    add_high(g::high_volumetric, 2.0 / 15.0, "(1 + 2 lambda/15)");
    add_high(g::high_surface, 1.0 / 7.0, "(1 + lambda/7)");

    auto pick = [&](bool surface) {
        if (rep.holds(surface ? g::high_surface : g::high_volumetric)) return Regime::High;
        if (rep.holds(g::medium_a)) return surface ? Regime::MediumSurfaceA : Regime::MediumVolumetricA;
        if (rep.holds(g::medium_b)) return surface ? Regime::MediumSurfaceB : Regime::MediumVolumetricB;
        if (rep.holds(g::medium_near)) return surface ? Regime::MediumSurfaceNearResonance : Regime::MediumNearResonance;
        if (rep.holds(g::low_small_gamma) || rep.holds(g::low_away) || rep.holds(g::low_near)) return Regime::Low;
        return Regime::Unclassified;
    };
    rep.regime = pick(false);
    rep.surface_regime = pick(true);
    rep.scale_of_C = near ? 1 - h1 : 2 - gm;
    rep.s_star = rep.scale_of_C;
    return rep;
}

struct RemainderEstimate {
    std::vector<double> exponents;
    double exponent = 0.0; // min of the set
    double value = 0.0;    // a^exponent
};

/// Power of a in the point-interaction remainder for the active branch.
inline RemainderEstimate predicted_remainder(const RegimeReport& rep, double a) {
    require(rep.holds(regime_groups::expansion), ErrorKind::config,
            "predicted remainder requested outside the validity range of the expansion");
    require(a > 0.0, ErrorKind::config, "a must be positive");
    const auto& p = rep.params;
    RemainderEstimate r;
    if (rep.near_resonance) {
        const double h1 = *p.h1;
        r.exponents = {2 - p.s - 2 * h1, 3 - 2 * p.t - 2 * p.s - 2 * h1};
    } else {
        r.exponents = {2 - p.s, 3 - p.gamma - 2 * p.t - p.s};
    }
    r.exponent = *std::min_element(r.exponents.begin(), r.exponents.end());
    r.value = std::pow(a, r.exponent);
    return r;
}

} // namespace bubblelab
