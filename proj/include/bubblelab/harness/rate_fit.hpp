#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/model/regime.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace bubblelab {

struct ExponentTerm {
    std::string label;
    double exponent = 0.0;
    bool log = false; // the term carries a log a factor, ignored by the fit
};

struct ExponentLedger {
    std::string formula; // e.g. "gamma-away-vol"
    std::vector<ExponentTerm> terms;

    double predicted() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& t : terms) m = std::min(m, t.exponent);
        return terms.empty() ? std::numeric_limits<double>::quiet_NaN() : m;
    }
};

/// Exponent terms of the error formula matching the regime and geometry.
inline ExponentLedger exponent_ledger(const RegimeReport& rep, bool surface) {
    const auto& p = rep.params;
    const double s = p.s, t = p.t, g = p.gamma, lam = p.lambda_K, eta = p.eta;
    const double h1 = p.h1.value_or(0.0);
    const Regime r = surface ? rep.surface_regime : rep.regime;
    ExponentLedger L;
    auto add = [&](std::string label, double e, bool log = false) { L.terms.push_back({std::move(label), e, log}); };
    switch (r) {
    case Regime::MediumVolumetricA:
    case Regime::MediumVolumetricB:
    case Regime::MediumSurfaceA:
    case Regime::MediumSurfaceB: {
        const bool small = r == Regime::MediumVolumetricA || r == Regime::MediumSurfaceA;
        L.formula = std::string(small ? "gamma-small-" : "gamma-away-") + (surface ? "sur" : "vol");
        if (small)
            add("1 - gamma", 1 - g);
        else
            add("2", 2.0);
        if (surface) {
            add("s eta / 2", s * eta / 2);
            add("s lambda / 2", s * lam / 2);
        } else {
            add("s lambda / 3", s * lam / 3);
        }
        add("2 - s", 2 - s);
        add("3 - gamma - 2t - s", 3 - g - 2 * t - s);
        add("s - t", s - t);
        if (surface) add("s / 2", s / 2, true);
        break;
    }
    case Regime::MediumNearResonance:
    case Regime::MediumSurfaceNearResonance:
        L.formula = surface ? "gamma-near-sur" : "gamma-near-vol";
        add("h1", h1);
        if (surface) {
            add("(1 - h1) eta / 2", (1 - h1) * eta / 2);
            add("(1 - h1) lambda / 2", (1 - h1) * lam / 2);
        } else {
            add("(1 - h1) lambda / 3", (1 - h1) * lam / 3);
        }
        add("1 - h1", 1 - h1);
        add("1 - 2t", 1 - 2 * t);
        add("1 - h1 - t", 1 - h1 - t);
        if (surface) add("(1 - h1) / 2", (1 - h1) / 2, true);
        break;
    case Regime::High:
        if (surface) {
            L.formula = "final-sur-blow";
            add("(s + h1 - 1) / 2", (s + h1 - 1) / 2);
            add("2 - s - 2h1", 2 - s - 2 * h1);
            add("3 - 2t - 2s - 2h1", 3 - 2 * t - 2 * s - 2 * h1);
            add("2 - 2h1 - s - t", 2 - 2 * h1 - s - t);
            add("7/2 (1 - s - h1) + s/2", 3.5 * (1 - s - h1) + s / 2, true);
            add("s lambda / 2 + 7/2 (1 - s - h1)", s * lam / 2 + 3.5 * (1 - s - h1));
            add("s/2 + s lambda / 2 + 7/2 (1 - s - h1)", s / 2 + s * lam / 2 + 3.5 * (1 - s - h1), true);
        } else {
            L.formula = "volume-blow";
            add("(s + h1 - 1) / 4", (s + h1 - 1) / 4);
            add("2 - s - 2h1", 2 - s - 2 * h1);
            add("3 - 2t - 2s - 2h1", 3 - 2 * t - 2 * s - 2 * h1);
            add("5/2 (1 - s - h1) + s lambda / 3", 2.5 * (1 - s - h1) + s * lam / 3);
            add("11/4 (1 - s - h1) + s / 3", 2.75 * (1 - s - h1) + s / 3);
            add("(1 - h1 - s) + (1 - h1 - t)", (1 - h1 - s) + (1 - h1 - t));
        }
        break;
    case Regime::Low:
        // total charge M C scales as a^{s* - s}
        L.formula = "low-vanishing";
        add("s* - s", rep.s_star - s);
        break;
    case Regime::Unclassified: L.formula = "none"; break;
    }
    return L;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double predicted_exponent = std::numeric_limits<double>::quiet_NaN();
    ExponentLedger ledger;
    std::size_t rows_used = 0;
    bool skipped = false;
    std::string note;
};

/// Least squares of log(err) against log(a) over rows with err > 0.
inline RateFit fit_rate(const std::vector<double>& a, const std::vector<double>& err, ExponentLedger ledger = {}) {
    require(a.size() == err.size(), ErrorKind::config, "fit_rate: a and error columns differ in length");
    RateFit fit;
    fit.ledger = std::move(ledger);
    fit.predicted_exponent = fit.ledger.predicted();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (err[i] > 0.0 && std::isfinite(err[i]) && a[i] > 0.0) {
            x.push_back(std::log(a[i]));
            y.push_back(std::log(err[i]));
        }
    fit.rows_used = x.size();
    if (x.size() < 3) {
        fit.skipped = true;
        fit.note = x.empty() && !a.empty() ? "all errors are zero (identically converged); fit skipped"
                                            : "fewer than 3 rows with positive error; fit skipped";
        return fit;
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::config, "fit_rate needs distinct a values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

inline nlohmann::json rate_fit_json(const RateFit& f) {
    nlohmann::json j;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["formula"] = f.ledger.formula;
    j["slope"] = f.skipped ? nlohmann::json(nullptr) : num(f.slope);
    j["intercept"] = f.skipped ? nlohmann::json(nullptr) : num(f.intercept);
    j["r_squared"] = f.skipped ? nlohmann::json(nullptr) : num(f.r_squared);
    j["predicted_exponent"] = num(f.predicted_exponent);
    j["rows_used"] = f.rows_used;
    j["skipped"] = f.skipped;
    j["note"] = f.note;
    auto& terms = j["exponent_ledger"] = nlohmann::json::array();
    for (const auto& t : f.ledger.terms) terms.push_back({{"term", t.label}, {"exponent", t.exponent}, {"log", t.log}});
    return j;
}

} // namespace bubblelab
