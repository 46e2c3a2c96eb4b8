#pragma once

#include "bubblelab/bemlimit/dirichlet.hpp"
#include "bubblelab/cluster/surface.hpp"
#include "bubblelab/cluster/volumetric.hpp"
#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/harness/config.hpp"
#include "bubblelab/harness/rate_fit.hpp"
#include "bubblelab/model/coefficient.hpp"
#include "bubblelab/model/effective.hpp"
#include "bubblelab/model/regime.hpp"
#include "bubblelab/pointscat/foldy_lax.hpp"
#include "bubblelab/surfmedium/chart_mesh.hpp"
#include "bubblelab/surfmedium/surface_solver.hpp"
#include "bubblelab/volmedium/lippmann_schwinger.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bubblelab {

enum class ComparatorKind { zero, volume, surface, dirichlet };

constexpr std::string_view to_string(ComparatorKind k) noexcept {
    switch (k) {
    case ComparatorKind::zero: return "zero";
    case ComparatorKind::volume: return "volmedium";
    case ComparatorKind::surface: return "surfmedium";
    case ComparatorKind::dirichlet: return "bemlimit";
    }
    return "zero";
}

inline ComparatorKind comparator_for(Regime r, GeometryKind g) {
    switch (r) {
    case Regime::Low: return ComparatorKind::zero;
    case Regime::MediumVolumetricA:
    case Regime::MediumVolumetricB:
    case Regime::MediumNearResonance: return ComparatorKind::volume;
    case Regime::MediumSurfaceA:
    case Regime::MediumSurfaceB:
    case Regime::MediumSurfaceNearResonance: return ComparatorKind::surface;
    case Regime::High: return ComparatorKind::dirichlet;
    case Regime::Unclassified: break;
    }
    fail(ErrorKind::config, std::string("no equivalent model for an unclassified ") +
                                (g == GeometryKind::surface ? "surface" : "volumetric") + " parameter set");
}

struct ErrorRow {
    double a = 0.0;
    std::size_t M = 0;
    std::size_t N = 0; // comparator unknowns
    double sup_err = 0.0;
    double field_scale = 0.0;
    double wall_time = 0.0; // measured seconds
    double t_cluster = 0.0;
    double omega = 0.0;
    double kappa0 = 0.0;
    double C = 0.0;
    double fl_residual = 0.0;
    double measure_mismatch = 0.0; // total cell measure / measure of the support - 1
    FarField fl, model;
};

struct RowFailure {
    double a = 0.0;
    std::string kind;
    std::string reason;
};

struct ErrorTable {
    std::vector<ErrorRow> rows; // a descending
    std::vector<RowFailure> failures;
    RegimeReport report;
    bool surface = false;
    ComparatorKind comparator = ComparatorKind::zero;
    std::vector<std::string> notes;

    std::vector<double> a_column() const {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r.a);
        return v;
    }
    std::vector<double> err_column() const {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r.sup_err);
        return v;
    }
};

inline RateFit fit_rate(const ErrorTable& t) { return fit_rate(t.a_column(), t.err_column(), exponent_ledger(t.report, t.surface)); }

namespace detail {

struct ComparatorResult {
    FarField ff;
    std::size_t N = 0;
};

inline std::vector<Vec3> rotate_all(const Eigen::Matrix3d& R, const std::vector<Vec3>& v) {
    std::vector<Vec3> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(R * x);
    return out;
}

inline ComparatorResult run_comparator(const ExperimentConfig& cfg, ComparatorKind kind, const ContrastParams& p,
                                       const std::vector<Vec3>& dirs_world) {
    ComparatorResult res;
    const Eigen::Matrix3d& R = cfg.rotation;
    const double kappa0 = p.kappa0();
    const IncidentWave inc_world{kappa0, cfg.theta};
    LayerOptions layer;
    layer.near_factor = cfg.comparator.layer_near_factor;
    switch (kind) {
    case ComparatorKind::zero:
        res.ff.directions = dirs_world;
        res.ff.values.assign(dirs_world.size(), cplx(0.0));
        return res;
    case ComparatorKind::volume: {
        // solved in the body frame; the voxel grid is axis aligned there
        const Domain& dom = *cfg.domain;
        const double g = (dom.hi() - dom.lo()).maxCoeff() / cfg.comparator.voxels;
        const VoxelGrid grid = make_voxel_grid(dom, g);
        const double cc = comparator_coefficient(cfg.bubble, p);
        VolumePotential pot;
        pot.h_star = 1.0;
        for (const auto& z : grid.centers) pot.V0.push_back(cc * (cfg.K(z) + 1.0));
        const IncidentWave inc_body{kappa0, R.transpose() * cfg.theta};
        const LSSolution sol = assemble_and_solve(grid, pot, inc_body);
        res.ff = far_field_volume(sol, pot, grid, kappa0, rotate_all(R.transpose(), dirs_world));
        res.ff.directions = dirs_world;
        res.N = grid.size();
        return res;
    }
    case ComparatorKind::surface: {
        const geom::SurfaceMesh body = chart_mesh(*cfg.chart, cfg.comparator.chart);
        const double cc = comparator_coefficient(cfg.bubble, p);
        std::vector<double> sigma;
        for (const auto& pn : body.panels()) sigma.push_back(cc * (cfg.K(pn.centroid) + 1.0));
        const geom::SurfaceMesh mesh = body.transformed(R, Vec3::Zero());
        const SurfaceSolution sol = assemble_and_solve_surface(mesh, sigma, 1.0, inc_world, layer);
        res.ff = far_field_surface(sol, mesh, kappa0, dirs_world);
        res.N = mesh.size();
        return res;
    }
    case ComparatorKind::dirichlet: {
        const geom::SurfaceMesh body = cfg.kind == GeometryKind::volumetric ? cfg.domain->boundary_mesh(cfg.comparator.mesh_level)
                                                                             : chart_mesh(*cfg.chart, cfg.comparator.chart);
        const geom::SurfaceMesh mesh = body.transformed(R, Vec3::Zero());
        DirichletOptions opt;
        opt.layer = layer;
        const DirichletSolution sol = solve_dirichlet(mesh, inc_world, dirs_world, opt);
        res.ff = sol.far;
        res.N = mesh.size();
        return res;
    }
    }
    return res;
}

} // namespace detail

/// Frequency for row a: fixed away from resonance, tuned to l_M a^{h1} near it.
inline ContrastParams row_params(const ExperimentConfig& cfg, double a) {
    ContrastParams p = cfg.contrast;
    if (p.near_resonance()) p.omega = near_resonance_omega(cfg.bubble, p, a);
    return p;
}

/// Exponent t used to build the cluster; surface cells of area a^s need t >= s/2.
inline double cluster_t(const ExperimentConfig& cfg) {
    const double t = cfg.contrast.t;
    return cfg.kind == GeometryKind::surface ? std::max(t, cfg.contrast.s / 2.0) : t;
}

inline Cluster build_cluster(const ExperimentConfig& cfg, double a) {
    PlacementOptions po{cfg.tol.d_min, cfg.tol.placement_attempts};
    const double t = cluster_t(cfg);
    if (cfg.kind == GeometryKind::volumetric) return build_volumetric(*cfg.domain, cfg.K, a, cfg.contrast.s, t, cfg.seed, po);
    return build_surface(*cfg.chart, cfg.K, a, cfg.contrast.s, t, cfg.seed, po);
}

/// One row per a: Foldy-Lax far field against the regime's equivalent model.
inline ErrorTable run_convergence(const ExperimentConfig& cfg, const std::function<void(const std::string&)>& log = {}) {
    ErrorTable table;
    table.report = classify_regime(cfg.contrast);
    table.surface = cfg.kind == GeometryKind::surface;
    const Regime regime = cfg.regime_of(table.report);
    table.comparator = comparator_for(regime, cfg.kind);
    if (cluster_t(cfg) != cfg.contrast.t) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "surface cluster built with t = %.6g (s/2) instead of the configured t = %.6g", cluster_t(cfg),
                      cfg.contrast.t);
        table.notes.emplace_back(buf);
    }
    const std::vector<Vec3> dirs = detail::rotate_all(cfg.rotation, fibonacci_sphere(cfg.directions));
    std::map<double, detail::ComparatorResult> cache; // keyed by kappa0

    for (const double a : cfg.a_sequence) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ContrastParams p = row_params(cfg, a);
            ErrorRow row;
            row.a = a;
            row.t_cluster = cluster_t(cfg);
            row.omega = p.omega;
            row.kappa0 = p.kappa0();
            const Cluster cl = build_cluster(cfg, a);
            row.M = cl.size();
            double covered = 0.0;
            for (const auto& cell : cl.cells) covered += cell.measure;
            row.measure_mismatch = covered / cl.domain_measure - 1.0;
            if (row.M > cfg.tol.max_bubbles)
                fail(ErrorKind::config, "M = " + std::to_string(row.M) + " exceeds max_bubbles = " + std::to_string(cfg.tol.max_bubbles));
            const ScatteringCoefficient sc = scattering_coefficient(cfg.bubble, p, a);
            row.C = sc.C.real();
            const IncidentWave inc{row.kappa0, cfg.theta};
            const auto centers = detail::rotate_all(cfg.rotation, cl.centers);
            FoldyLaxOptions flo;
            flo.dense_max = cfg.tol.fl_dense_max;
            flo.gmres.rel_tol = cfg.tol.gmres_tol;
            const ChargeSolution q = solve_foldy_lax(centers, sc.C, inc, flo);
            row.fl_residual = q.residual;
            row.fl = far_field(q.Q, centers, row.kappa0, dirs);
            auto it = cache.find(row.kappa0);
            if (it == cache.end()) it = cache.emplace(row.kappa0, detail::run_comparator(cfg, table.comparator, p, dirs)).first;
            row.model = it->second.ff;
            row.N = it->second.N;
            row.sup_err = sup_difference(row.fl, row.model);
            row.field_scale = row.fl.max_abs();
            row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (log) {
                char buf[240];
                std::snprintf(buf, sizeof buf, "a = %.6g  M = %zu  N = %zu  sup_err = %.6e  field_scale = %.6e  mismatch = %+.2e  (%.2f s)", a,
                              row.M, row.N, row.sup_err, row.field_scale, row.measure_mismatch, row.wall_time);
                log(buf);
            }
            table.rows.push_back(std::move(row));
        } catch (const Error& e) {
            table.failures.push_back({a, std::string(to_string(e.kind())), e.what()});
            if (log) log("a = " + std::to_string(a) + " failed: " + e.what());
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Output files.

inline nlohmann::json regime_json(const RegimeReport& rep) {
    nlohmann::json j;
    j["regime"] = std::string(to_string(rep.regime));
    j["surface_regime"] = std::string(to_string(rep.surface_regime));
    j["scale_of_C"] = rep.scale_of_C;
    j["s_star"] = rep.s_star;
    j["near_resonance"] = rep.near_resonance;
    auto& ledger = j["ledger"] = nlohmann::json::array();
    for (const auto& c : rep.satisfied) ledger.push_back({{"group", c.group}, {"condition", c.name}, {"value", c.value}});
    nlohmann::json groups;
    for (const auto& c : rep.satisfied)
        if (!groups.contains(c.group)) groups[c.group] = rep.holds(c.group);
    j["groups"] = groups;
    const auto& p = rep.params;
    j["params"] = {{"rho0", p.rho0}, {"k0", p.k0}, {"C_rho", p.C_rho}, {"gamma", p.gamma}, {"tau", p.tau}, {"omega", p.omega},
                   {"s", p.s},       {"t", p.t},   {"lambda", p.lambda_K}, {"eta", p.eta}, {"l0", p.l0}};
    if (p.h1) j["params"]["h1"] = *p.h1;
    if (p.l_M) j["params"]["l_M"] = *p.l_M;
    return j;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_error_table_csv(const std::string& path, const ErrorTable& t, bool deterministic) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path);
    os << "a,M,N,sup_err,field_scale,wall_time_s\n";
    for (const auto& r : t.rows)
        os << fmt_double(r.a) << ',' << r.M << ',' << r.N << ',' << fmt_double(r.sup_err) << ',' << fmt_double(r.field_scale) << ','
           << fmt_double(deterministic ? 0.0 : r.wall_time) << '\n';
}

struct TableColumns {
    std::vector<double> a, sup_err;
};

/// Reads a and sup_err back from error_table.csv.
inline TableColumns read_error_table_csv(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
    std::string line;
    std::getline(is, line);
    require(line.rfind("a,M,N,sup_err,field_scale,wall_time_s", 0) == 0, ErrorKind::io, path + " does not have the error table header");
    TableColumns c;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (true) {
            const auto q = line.find(',', pos);
            f.push_back(line.substr(pos, q - pos));
            if (q == std::string::npos) break;
            pos = q + 1;
        }
        require(f.size() >= 4, ErrorKind::io, "short row in " + path);
        try {
            c.a.push_back(std::stod(f[0]));
            c.sup_err.push_back(std::stod(f[3]));
        } catch (const std::exception&) {
            fail(ErrorKind::io, "non-numeric row in " + path);
        }
    }
    return c;
}

/// error_table.csv, rate_fit.json, regime.json, run.json, timings.csv and farfield_*.csv.
inline RateFit write_outputs(const std::string& dir, const ExperimentConfig& cfg, const ErrorTable& t) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create output directory " + dir);
    const fs::path d(dir);
    write_error_table_csv((d / "error_table.csv").string(), t, cfg.deterministic);
    {
        std::ofstream os(d / "timings.csv");
        require(static_cast<bool>(os), ErrorKind::io, "cannot write timings.csv");
        os << "a,wall_time_s\n";
        for (const auto& r : t.rows) os << fmt_double(r.a) << ',' << fmt_double(r.wall_time) << '\n';
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        write_farfield_csv((d / ("farfield_" + std::to_string(i) + "_fl.csv")).string(), t.rows[i].fl);
        write_farfield_csv((d / ("farfield_" + std::to_string(i) + "_model.csv")).string(), t.rows[i].model);
    }
    const RateFit fit = fit_rate(t);
    {
        std::ofstream os(d / "rate_fit.json");
        require(static_cast<bool>(os), ErrorKind::io, "cannot write rate_fit.json");
        os << rate_fit_json(fit).dump(2) << '\n';
    }
    {
        std::ofstream os(d / "regime.json");
        require(static_cast<bool>(os), ErrorKind::io, "cannot write regime.json");
        os << regime_json(t.report).dump(2) << '\n';
    }
    nlohmann::json run;
    run["comparator"] = std::string(to_string(t.comparator));
    run["geometry"] = t.surface ? "surface" : "volumetric";
    run["seed"] = cfg.seed;
    run["notes"] = t.notes;
    auto& rows = run["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"a", r.a},         {"M", r.M},           {"N", r.N},         {"sup_err", r.sup_err},
                        {"field_scale", r.field_scale}, {"relative_err", r.field_scale > 0 ? r.sup_err / r.field_scale : 0.0},
                        {"t_cluster", r.t_cluster}, {"omega", r.omega}, {"kappa0", r.kappa0}, {"C", r.C},
                        {"fl_residual", r.fl_residual}, {"measure_mismatch", r.measure_mismatch}});
    auto& fails = run["failures"] = nlohmann::json::array();
    for (const auto& f : t.failures) fails.push_back({{"a", f.a}, {"kind", f.kind}, {"reason", f.reason}});
    std::ofstream os(d / "run.json");
    require(static_cast<bool>(os), ErrorKind::io, "cannot write run.json");
    os << run.dump(2) << '\n';
    return fit;
}

} // namespace bubblelab
