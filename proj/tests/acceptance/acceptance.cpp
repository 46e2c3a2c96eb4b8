// Acceptance gate: `acceptance N` runs criterion N, no argument runs all of them.
// Prints one PASS/FAIL line per criterion; exit status is non-zero on any failure.

#include "bubblelab/bubblelab.hpp"
#include "oracles/series.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef BUBBLELAB_CONFIG_DIR
#define BUBBLELAB_CONFIG_DIR "configs"
#endif

using namespace bubblelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.3e") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
    return "[" + s + "]";
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return v.size() >= 2;
}

FarField oracle_far(const std::vector<cplx>& b, double kappa, const std::vector<Vec3>& dirs, const Vec3& theta) {
    FarField ff;
    ff.directions = dirs;
    for (const auto& d : dirs) ff.values.push_back(oracle::far_from_coefficients(b, kappa, d.dot(theta)));
    return ff;
}

ContrastParams worked_sphere_params() {
    // k_m = rho_m k0 / (rho0 tau) = 1 with rho_m = C_rho a^2 rho0 = 0.5 at a = 1
    ContrastParams p;
    p.C_rho = 0.5;
    p.tau = 0.5;
    return p;
}

ExperimentConfig config(const std::string& name) { return load_config(std::string(BUBBLELAB_CONFIG_DIR) + "/" + name); }

ErrorTable converge(const std::string& name) {
    const auto cfg = config(name);
    auto t = run_convergence(cfg, [&](const std::string& line) { std::printf("  [%s] %s\n", name.c_str(), line.c_str()); });
    require(t.failures.empty(), ErrorKind::numeric, name + ": " + std::to_string(t.failures.size()) + " rows failed");
    return t;
}

Outcome criterion_1() {
    const auto mesh = geom::icosphere(5);
    const auto t0 = std::chrono::steady_clock::now();
    const double A = compute_hat_A(mesh);
    const double dt = seconds_since(t0);
    const double rel = std::abs(A / (-8.0 * pi / 3.0) - 1.0);
    return {mesh.size() >= 5120 && rel <= 1e-3 && dt <= 60.0,
            fmt("panels %zu, hatA %.8f, rel err %.2e (gate 1e-3), %.1f s (gate 60 s)", mesh.size(), A, rel, dt)};
}

Outcome criterion_2() {
    const auto b = BubbleSpec::unit_sphere(3, true);
    const auto p = worked_sphere_params();
    const double w6 = minnaert(b, p, 1.0).omega_M2;
    const double e6 = std::abs(w6 - 6.0);
    std::vector<double> as{1e-1, 1e-2, 1e-3}, diff;
    for (double a : as) {
        const auto f = minnaert(b, p, a);
        diff.push_back(std::abs(f.omega_M2 - f.omega_bar_M2));
    }
    const auto fit = fit_rate(as, diff);
    return {e6 <= 1e-10 && std::abs(fit.slope - 2.0) <= 0.2,
            fmt("omega_M^2 = %.15f (|err| %.1e, gate 1e-10); slope of omega_M^2 - omega_bar_M^2 = %.4f (gate 2 +- 0.2)", w6, e6,
                fit.slope)};
}

Outcome criterion_3() {
    const auto b = BubbleSpec::unit_sphere(3, true);
    auto p = worked_sphere_params();
    p.l0 = 1e-15;
    const double a = 0.1;
    const double wM = std::sqrt(minnaert(b, p, a).omega_M2);
    auto sign_at = [&](double w) {
        p.omega = w;
        return scattering_coefficient(b, p, a).sign;
    };
    double lo = 0.5 * wM, hi = 1.5 * wM;
    const auto s_lo = sign_at(lo), s_hi = sign_at(hi);
    bool hit = false;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * wM; ++it) {
        const double mid = 0.5 * (lo + hi);
        try {
            (sign_at(mid) == s_lo ? lo : hi) = mid;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::resonance) throw;
            lo = hi = mid;
            hit = true;
        }
    }
    const double flip = 0.5 * (lo + hi);
    const double rel = std::abs(flip / wM - 1.0);
    const bool signs = s_lo == CoefficientSign::negative && s_hi == CoefficientSign::positive;
    return {signs && rel <= 1e-8, fmt("C < 0 below and > 0 above: %s; flip at %.12f vs omega_M %.12f, rel %.1e (gate 1e-8)%s",
                                      signs ? "yes" : "no", flip, wM, rel, hit ? ", exact resonance hit" : "")};
}

Outcome criterion_4() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto rvec = [&] { return Vec3(U(rng), U(rng), U(rng)); };
    const double kappa = 1.3;
    const cplx C = -0.04;
    const IncidentWave inc{kappa, Vec3(1, 2, 2).normalized()};
    std::ostringstream os;
    bool ok = true;

    // M = 1
    const std::vector<Vec3> one{rvec()};
    const auto s1 = solve_foldy_lax(one, C, inc);
    const double e1 = std::abs(s1.Q[0] + C * inc(one[0])) / std::abs(C);
    ok &= e1 <= 1e-14;
    os << fmt("M=1 rel %.1e; ", e1);

    // M = 2 closed form
    const std::vector<Vec3> two{rvec(), rvec()};
    const double r = (two[0] - two[1]).norm();
    const cplx phi = std::exp(oracle::I * kappa * r) / (4.0 * pi * r);
    const cplx u1 = inc(two[0]), u2 = inc(two[1]);
    const cplx det = 1.0 / (C * C) - phi * phi;
    const cplx q1 = -(u1 / C - phi * u2) / det, q2 = -(u2 / C - phi * u1) / det;
    const auto s2 = solve_foldy_lax(two, C, inc);
    const double e2 = std::max(std::abs(s2.Q[0] - q1), std::abs(s2.Q[1] - q2)) / std::max(std::abs(q1), std::abs(q2));
    ok &= e2 <= 1e-12;
    os << fmt("M=2 rel %.1e; ", e2);

    // residuals on lattice clusters of the unit cube
    const auto b = BubbleSpec::unit_sphere(3, true);
    ContrastParams p;
    p.omega = 0.8 * std::sqrt(minnaert(b, p, 1e-3).omega_bar_M2);
    const auto cube = Domain::box(Vec3::Constant(-0.5), Vec3::Constant(0.5));
    double worst = 0.0;
    std::size_t Mmax = 0;
    for (int n : {3, 8, 16}) {
        const double a = std::pow(static_cast<double>(n), -3.0);
        const auto cl = build_volumetric(cube, DensityField::constant(0.0), a, 1.0, 0.4, 1);
        const auto Cm = scattering_coefficient(b, p, a).C;
        const auto sol = solve_foldy_lax(cl.centers, Cm, IncidentWave{p.kappa0(), Vec3::UnitZ()});
        worst = std::max(worst, sol.residual);
        Mmax = std::max(Mmax, cl.size());
    }
    ok &= worst <= 1e-10 && Mmax == 4096;
    os << fmt("max residual %.1e up to M=%zu; ", worst, Mmax);

    // reciprocity and translation on a random cluster
    std::vector<Vec3> z;
    for (int m = 0; m < 60; ++m) z.push_back(rvec());
    const auto dirs = fibonacci_sphere(12);
    double rec = 0.0, tra = 0.0;
    const Vec3 shift(0.3, -0.7, 1.1);
    std::vector<Vec3> zs;
    for (const auto& v : z) zs.push_back(v + shift);
    for (const auto& th : dirs) {
        const IncidentWave w{kappa, th};
        const auto Q = solve_foldy_lax(z, C, w).Q;
        const auto ff = far_field(Q, z, kappa, dirs);
        const auto ffs = far_field(solve_foldy_lax(zs, C, w).Q, zs, kappa, dirs);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const auto back = far_field(solve_foldy_lax(z, C, IncidentWave{kappa, -dirs[i]}).Q, z, kappa, {-th});
            const double sc = std::abs(ff.values[i]);
            rec = std::max(rec, std::abs(ff.values[i] - back.values[0]) / sc);
            const cplx phase = std::exp(oracle::I * kappa * (th - dirs[i]).dot(shift));
            tra = std::max(tra, std::abs(ffs.values[i] - phase * ff.values[i]) / sc);
        }
    }
    ok &= rec <= 1e-10 && tra <= 1e-10;
    os << fmt("reciprocity %.1e, translation %.1e (gates 1e-14, 1e-12, 1e-10, 1e-10, 1e-10)", rec, tra);
    return {ok, os.str()};
}

Outcome criterion_5() {
    const auto mesh = geom::icosphere(4);
    const auto dirs = fibonacci_sphere(200);
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve_dirichlet(mesh, IncidentWave{1.0, Vec3::UnitZ()}, dirs);
    const double dt = seconds_since(t0);
    const auto ref = oracle_far(oracle::soft_sphere_coefficients(1.0, 1.0), 1.0, dirs, Vec3::UnitZ());
    const double err = relative_sup_error(sol.far, ref);
    return {mesh.size() >= 2000 && err <= 0.01 && dt <= 120.0,
            fmt("panels %zu, rel sup err %.2e (gate 1e-2), %.1f s (gate 120 s)", mesh.size(), err, dt)};
}

Outcome criterion_6() {
    const auto ball = Domain::ball(Vec3::Zero(), 1.0);
    const auto grid = make_voxel_grid(ball, 2.0 / 48.0);
    const auto dirs = fibonacci_sphere(200);
    const IncidentWave inc{1.0, Vec3::UnitZ()};
    auto solve = [&](double V0) {
        const auto pot = constant_potential(grid, V0);
        return far_field_volume(assemble_and_solve(grid, pot, inc), pot, grid, 1.0, dirs);
    };
    const double V0 = 2.0;
    const auto ref = oracle_far(oracle::penetrable_ball_coefficients(1.0, std::sqrt(cplx(1.0 - V0)), 1.0), 1.0, dirs, inc.theta);
    const double err = relative_sup_error(solve(V0), ref);

    const double Vb = 1e-4;
    FarField born;
    born.directions = dirs;
    for (const auto& d : dirs) born.values.push_back(oracle::born_ball(1.0, Vb, 1.0, d.dot(inc.theta)));
    const double eb = relative_sup_error(solve(Vb), born);
    return {err <= 0.02 && eb <= 1e-3,
            fmt("grid 48^3 (%zu cells): series rel err %.2e (gate 2e-2), Born rel err %.2e at V0 = %g (gate 1e-3)", grid.size(),
                err, eb, Vb)};
}

Outcome criterion_7() {
    const auto mesh = geom::icosphere(4);
    const auto dirs = fibonacci_sphere(200);
    const IncidentWave inc{1.0, Vec3::UnitZ()};
    const double sigma = 2.0;
    const auto sol = assemble_and_solve_surface(mesh, std::vector<double>(mesh.size(), sigma), 1.0, inc);
    const auto ff = far_field_surface(sol, mesh, 1.0, dirs);
    const auto ref = oracle_far(oracle::transmission_sphere_coefficients(1.0, sigma, 1.0), 1.0, dirs, inc.theta);
    const double err = relative_sup_error(ff, ref);
    const auto jr = jump_check(sol, mesh, inc);
    return {err <= 0.02 && jr.jump_dn <= 0.05 && jr.jump_u <= 0.05,
            fmt("panels %zu, sigma %g: series rel err %.2e (gate 2e-2), jump defect [du/dnu] %.2e, [u] %.2e (gate 5e-2)",
                mesh.size(), sigma, err, jr.jump_dn, jr.jump_u)};
}

Outcome criterion_8() {
    const auto mesh = geom::icosphere(3);
    const IncidentWave inc{1.0, Vec3::UnitZ()};
    const std::vector<double> sigma(mesh.size(), 1.0);
    std::vector<double> hs, norms;
    for (int k = 0; k <= 8; ++k) {
        const double h = std::pow(10.0, 0.25 * k);
        hs.push_back(h);
        norms.push_back(surface_l2_norm(assemble_and_solve_surface(mesh, sigma, h, inc), mesh));
    }
    const double slope = fit_rate(hs, norms).slope;
    return {std::abs(slope + 0.5) <= 0.1,
            fmt("unit sphere, sigma = 1, kappa0 = 1, h_* in [1, 100]: ||Y|| = %s, log-log slope %.3f (gate -0.5 +- 0.1)",
                join(norms).c_str(), slope)};
}

Outcome criterion_9() {
    const auto t = converge("low.json");
    std::vector<double> sup, factors;
    for (const auto& r : t.rows) sup.push_back(r.fl.max_abs());
    bool ok = sup.size() == 4;
    for (std::size_t i = 1; i < sup.size(); ++i) {
        factors.push_back(sup[i - 1] / sup[i]);
        ok &= factors.back() >= 1.1;
    }
    return {ok, fmt("sup|u_FL| = %s, factors per halving %s (gate >= 1.1)", join(sup).c_str(), join(factors, "%.3f").c_str())};
}

Outcome medium_or_high(const std::vector<std::string>& names, const std::string& expected_formula) {
    bool ok = true;
    std::string detail;
    for (const auto& name : names) {
        const auto t = converge(name);
        const auto err = t.err_column();
        const auto fit = fit_rate(t);
        const bool dec = strictly_decreasing(err) && t.rows.size() == config(name).a_sequence.size();
        std::size_t mmax = 0;
        for (const auto& r : t.rows) mmax = std::max(mmax, r.M);
        ok &= dec && mmax <= 4096 && (expected_formula.empty() || fit.ledger.formula == expected_formula);
        detail += fmt("%s: a = %s, sup_err = %s, M <= %zu, strictly decreasing %s, slope %.3f vs predicted %.3f (%s); ",
                      name.c_str(), join(t.a_column()).c_str(), join(err).c_str(), mmax, dec ? "yes" : "no", fit.slope,
                      fit.predicted_exponent, fit.ledger.formula.c_str());
    }
    return {ok, detail};
}

Outcome criterion_10() { return medium_or_high({"medium_vol.json"}, "gamma-away-vol"); }
Outcome criterion_11() { return medium_or_high({"medium_sur.json"}, "gamma-away-sur"); }

Outcome criterion_12() {
    for (const char* n : {"high_vol.json", "high_sur.json"}) {
        const auto c = config(n);
        const auto& p = c.contrast;
        require(p.h1 && std::abs(*p.h1 - 0.1) < 1e-12 && *p.l_M > 0 && std::abs(p.s - 0.95) < 1e-12 &&
                    std::abs(p.t - 0.33) < 1e-12 && std::abs(p.lambda_K - 0.9) < 1e-12,
                ErrorKind::config, std::string(n) + " does not use the worked high-regime parameters");
    }
    const bool closed = config("high_vol.json").kind == GeometryKind::volumetric;
    const auto sur = config("high_sur.json");
    const bool open = sur.kind == GeometryKind::surface && !sur.chart->closed();
    auto o = medium_or_high({"high_vol.json", "high_sur.json"}, "");
    o.pass &= closed && open;
    return o;
}

Outcome criterion_13() {
    std::ostringstream os;
    bool ok = true;
    auto expect = [&](const char* label, const ContrastParams& p, Regime want) {
        const auto rep = classify_regime(p);
        const bool hit = rep.regime == want;
        ok &= hit;
        os << label << " -> " << to_string(rep.regime) << (hit ? "" : " (expected " + std::string(to_string(want)) + ")") << "; ";
        return rep;
    };
    ContrastParams a;
    a.gamma = 0.7, a.s = 1.3, a.t = 0.45;
    expect("gamma 0.7, s 1.3, t 0.45", a, Regime::MediumVolumetricA);
    ContrastParams b;
    b.gamma = 1.0, b.s = 0.5, b.t = 0.2;
    expect("gamma 1, s 0.5, t 0.2", b, Regime::Low);
    ContrastParams c;
    c.gamma = 1.0, c.h1 = 0.1, c.l_M = 1.0, c.s = 0.95, c.t = 0.33, c.lambda_K = 0.9;
    const auto rep = expect("high worked set", c, Regime::High);
    ok &= rep.surface_regime == Regime::High;

    // every inequality, recomputed here from the raw parameters
    const double h1 = 0.1, s = 0.95, t = 0.33, lam = 0.9;
    struct Row {
        std::string name;
        bool want;
    };
    const std::vector<Row> common{{"gamma = 1 and near", true}, {"l_M > 0", true},         {"0 < 1 - h1", 0 < 1 - h1},
                                  {"1 - h1 < s", 1 - h1 < s},   {"s <= 3t", s <= 3 * t},  {"3t < 3/2 - t - h1", 3 * t < 1.5 - t - h1},
                                  {"h1 < 1/6", h1 < 1.0 / 6.0}};
    int checked = 0;
    for (const auto* group : {&regime_groups::high_volumetric, &regime_groups::high_surface}) {
        for (const auto& r : common) {
            ok &= rep.value(*group, r.name) == r.want;
            ++checked;
        }
    }
    ok &= rep.value(regime_groups::high_volumetric, "3t < (1 + 2 lambda/15)(1 - h1)") == (3 * t < (1 + 2 * lam / 15) * (1 - h1));
    ok &= rep.value(regime_groups::high_surface, "3t < (1 + lambda/7)(1 - h1)") == (3 * t < (1 + lam / 7) * (1 - h1));
    checked += 2;

    // 3t between the two lambda bounds: only the surface variant stays High
    ContrastParams d = c;
    d.t = 1.01 / 3.0;
    const auto rd = classify_regime(d);
    const bool split = !rd.value(regime_groups::high_volumetric, "3t < (1 + 2 lambda/15)(1 - h1)") &&
                       rd.value(regime_groups::high_surface, "3t < (1 + lambda/7)(1 - h1)") && rd.regime != Regime::High &&
                       rd.surface_regime == Regime::High;
    ok &= split;
    os << checked << " high-regime inequalities match; lambda bounds separate at 3t = 1.01: " << (split ? "yes" : "no");
    return {ok, os.str()};
}

Outcome criterion_14() {
    const auto cfg = config("low.json");
    const fs::path base = fs::temp_directory_path() / "bubblelab_determinism";
    std::vector<std::string> bytes;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = base / std::to_string(run);
        fs::create_directories(dir);
        const auto t = run_convergence(cfg);
        write_error_table_csv((dir / "error_table.csv").string(), t, cfg.deterministic);
        std::ifstream is(dir / "error_table.csv", std::ios::binary);
        bytes.emplace_back(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
    }
    fs::remove_all(base);
    const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
    return {same, fmt("low.json twice with seed %llu: %zu bytes each, identical %s", static_cast<unsigned long long>(cfg.seed),
                      bytes[0].size(), same ? "yes" : "no")};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{criterion_1,  criterion_2,  criterion_3,  criterion_4,  criterion_5,
                                                         criterion_6,  criterion_7,  criterion_8,  criterion_9,  criterion_10,
                                                         criterion_11, criterion_12, criterion_13, criterion_14};
    std::vector<int> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    } else {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
    }
    int failed = 0;
    for (int n : which) {
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "no criterion %d\n", n);
            return 64;
        }
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[static_cast<std::size_t>(n - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("criterion %2d: %s  %s  [%.1f s]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
