#include "bubblelab/bubblelab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace bl = bubblelab;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_usage = 64;

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> a;
    double h_star = 1.0;
};

// Errors raised while reading the config count as config errors, whatever their kind.
struct ConfigStageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bl::ExperimentConfig load(const Common& c) {
    try {
        bl::ExperimentConfig cfg = bl::load_config(c.config);
        if (c.seed) cfg.seed = *c.seed;
        if (!c.out.empty()) cfg.out = c.out;
        return cfg;
    } catch (const bl::Error& e) {
        throw ConfigStageError(e.what());
    }
}

fs::path out_dir(const bl::ExperimentConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    bl::require(!ec, bl::ErrorKind::io, "cannot create output directory " + cfg.out);
    return fs::path(cfg.out);
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    std::ofstream os(p);
    bl::require(static_cast<bool>(os), bl::ErrorKind::io, "cannot write " + p.string());
    os << j.dump(2) << '\n';
}

double pick_a(const Common& c, const bl::ExperimentConfig& cfg) {
    const double a = c.a.value_or(cfg.a_sequence.front());
    if (!(a > 0.0)) throw ConfigStageError("--a must be positive");
    return a;
}

std::vector<bl::Vec3> grid(const bl::ExperimentConfig& cfg) { return bl::fibonacci_sphere(cfg.directions); }

int cmd_regime(const Common& c) {
    const auto cfg = load(c);
    const auto rep = bl::classify_regime(cfg.contrast);
    nlohmann::json j = bl::regime_json(rep);
    j["selected"] = std::string(bl::to_string(cfg.regime_of(rep)));
    std::cout << j.dump(2) << '\n';
    write_json(out_dir(cfg) / "regime.json", j);
    return exit_ok;
}

int cmd_cluster(const Common& c) {
    const auto cfg = load(c);
    const double a = pick_a(c, cfg);
    const bl::Cluster cl = bl::build_cluster(cfg, a);
    const auto dir = out_dir(cfg);
    bl::write_cluster_json((dir / "cluster.json").string(), cl);
    std::printf("a = %.6g  M = %zu  t = %.6g\n", a, cl.size(), bl::cluster_t(cfg));
    return exit_ok;
}

int cmd_fl(const Common& c) {
    const auto cfg = load(c);
    const double a = pick_a(c, cfg);
    const bl::ContrastParams p = bl::row_params(cfg, a);
    const bl::Cluster cl = bl::build_cluster(cfg, a);
    const auto sc = bl::scattering_coefficient(cfg.bubble, p, a);
    const bl::IncidentWave inc{p.kappa0(), cfg.theta};
    bl::FoldyLaxOptions opt;
    opt.dense_max = cfg.tol.fl_dense_max;
    opt.gmres.rel_tol = cfg.tol.gmres_tol;
    const auto q = bl::solve_foldy_lax(cl.centers, sc.C, inc, opt);
    const auto ff = bl::far_field(q.Q, cl.centers, p.kappa0(), grid(cfg));
    const auto dir = out_dir(cfg);
    {
        std::ofstream os(dir / "charges.csv");
        os << "x,y,z,re_Q,im_Q\n";
        for (std::size_t m = 0; m < cl.size(); ++m)
            os << bl::fmt_double(cl.centers[m].x()) << ',' << bl::fmt_double(cl.centers[m].y()) << ',' << bl::fmt_double(cl.centers[m].z())
               << ',' << bl::fmt_double(q.Q[static_cast<Eigen::Index>(m)].real()) << ','
               << bl::fmt_double(q.Q[static_cast<Eigen::Index>(m)].imag()) << '\n';
    }
    bl::write_farfield_csv((dir / "farfield_fl.csv").string(), ff);
    write_json(dir / "solve_fl.json", {{"a", a},
                                       {"M", cl.size()},
                                       {"C", sc.C.real()},
                                       {"kappa0", p.kappa0()},
                                       {"residual", q.residual},
                                       {"direct", q.direct},
                                       {"iterations", q.iterations},
                                       {"field_scale", ff.max_abs()}});
    std::printf("M = %zu  residual = %.3e  max|u_inf| = %.6e\n", cl.size(), q.residual, ff.max_abs());
    return exit_ok;
}

int cmd_ls(const Common& c) {
    const auto cfg = load(c);
    if (!cfg.domain) throw ConfigStageError("solve-ls needs a volumetric geometry");
    const bl::ContrastParams p = bl::row_params(cfg, pick_a(c, cfg));
    const double g = (cfg.domain->hi() - cfg.domain->lo()).maxCoeff() / cfg.comparator.voxels;
    const auto vg = bl::make_voxel_grid(*cfg.domain, g);
    const double cc = bl::comparator_coefficient(cfg.bubble, p);
    bl::VolumePotential pot;
    pot.h_star = c.h_star;
    for (const auto& z : vg.centers) pot.V0.push_back(cc * (cfg.K(z) + 1.0));
    const bl::IncidentWave inc{p.kappa0(), cfg.theta};
    const auto sol = bl::assemble_and_solve(vg, pot, inc);
    const auto ff = bl::far_field_volume(sol, pot, vg, p.kappa0(), grid(cfg));
    const auto dir = out_dir(cfg);
    bl::write_volume_solution_csv((dir / "volume_solution.csv").string(), sol, vg);
    bl::write_farfield_csv((dir / "farfield_ls.csv").string(), ff);
    write_json(dir / "solve_ls.json", {{"cells", vg.size()},
                                       {"spacing", g},
                                       {"h_star", c.h_star},
                                       {"residual", sol.residual},
                                       {"direct", sol.direct},
                                       {"iterations", sol.iterations},
                                       {"symmetric_difference_bound", vg.symmetric_difference_bound}});
    std::printf("cells = %zu  residual = %.3e  max|Y_inf| = %.6e\n", vg.size(), sol.residual, ff.max_abs());
    return exit_ok;
}

int cmd_sie(const Common& c) {
    const auto cfg = load(c);
    if (!cfg.chart) throw ConfigStageError("solve-sie needs a surface geometry");
    const bl::ContrastParams p = bl::row_params(cfg, pick_a(c, cfg));
    const auto mesh = bl::chart_mesh(*cfg.chart, cfg.comparator.chart);
    const double cc = bl::comparator_coefficient(cfg.bubble, p);
    std::vector<double> sigma;
    for (const auto& pn : mesh.panels()) sigma.push_back(cc * (cfg.K(pn.centroid) + 1.0));
    const bl::IncidentWave inc{p.kappa0(), cfg.theta};
    bl::LayerOptions layer;
    layer.near_factor = cfg.comparator.layer_near_factor;
    const auto sol = bl::assemble_and_solve_surface(mesh, sigma, c.h_star, inc, layer);
    const auto ff = bl::far_field_surface(sol, mesh, p.kappa0(), grid(cfg));
    const auto jr = bl::jump_check(sol, mesh, inc);
    const auto dir = out_dir(cfg);
    bl::write_surface_solution_csv((dir / "surface_solution.csv").string(), sol, mesh);
    bl::write_farfield_csv((dir / "farfield_sie.csv").string(), ff);
    write_json(dir / "solve_sie.json", {{"panels", mesh.size()},
                                        {"h_star", c.h_star},
                                        {"residual", sol.residual},
                                        {"cond_estimate", sol.cond_estimate},
                                        {"l2_norm", bl::surface_l2_norm(sol, mesh)},
                                        {"jump_u", jr.jump_u},
                                        {"jump_dn", jr.jump_dn},
                                        {"jump_dn_flipped", jr.jump_dn_flipped},
                                        {"sign_agreement", jr.sign_agreement}});
    std::printf("panels = %zu  jump_dn = %.3e  max|Y_inf| = %.6e\n", mesh.size(), jr.jump_dn, ff.max_abs());
    return exit_ok;
}

int cmd_bem(const Common& c) {
    const auto cfg = load(c);
    const bl::ContrastParams p = bl::row_params(cfg, pick_a(c, cfg));
    const auto mesh = cfg.domain ? cfg.domain->boundary_mesh(cfg.comparator.mesh_level) : bl::chart_mesh(*cfg.chart, cfg.comparator.chart);
    const bl::IncidentWave inc{p.kappa0(), cfg.theta};
    bl::DirichletOptions opt;
    opt.layer.near_factor = cfg.comparator.layer_near_factor;
    const auto sol = bl::solve_dirichlet(mesh, inc, grid(cfg), opt);
    const auto dir = out_dir(cfg);
    bl::write_farfield_csv((dir / "farfield_bem.csv").string(), sol.far);
    write_json(dir / "solve_bem.json",
               {{"panels", mesh.size()}, {"kappa0", p.kappa0()}, {"residual", sol.residual}, {"cond_estimate", sol.cond_estimate}});
    std::printf("panels = %zu  cond = %.3e  max|u_inf| = %.6e\n", mesh.size(), sol.cond_estimate, sol.far.max_abs());
    return exit_ok;
}

int cmd_converge(const Common& c) {
    const auto cfg = load(c);
    const auto table = bl::run_convergence(cfg, [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); });
    const auto fit = bl::write_outputs(cfg.out, cfg, table);
    std::printf("regime %s, comparator %s, %zu rows, %zu failures\n", std::string(bl::to_string(cfg.regime_of(table.report))).c_str(),
                std::string(bl::to_string(table.comparator)).c_str(), table.rows.size(), table.failures.size());
    if (fit.skipped)
        std::printf("fit skipped: %s\n", fit.note.c_str());
    else
        std::printf("slope %.4f (r^2 %.4f), predicted exponent %.4f [%s]\n", fit.slope, fit.r_squared, fit.predicted_exponent,
                    fit.ledger.formula.c_str());
    if (table.rows.empty() && !table.failures.empty()) return exit_solver;
    return exit_ok;
}

int cmd_fit(const Common& c, const std::string& table_path) {
    const auto cfg = load(c);
    const std::string path = table_path.empty() ? (fs::path(cfg.out) / "error_table.csv").string() : table_path;
    const auto cols = bl::read_error_table_csv(path);
    const auto rep = bl::classify_regime(cfg.contrast);
    const auto fit = bl::fit_rate(cols.a, cols.sup_err, bl::exponent_ledger(rep, cfg.kind == bl::GeometryKind::surface));
    const auto j = bl::rate_fit_json(fit);
    std::cout << j.dump(2) << '\n';
    write_json(out_dir(cfg) / "rate_fit.json", j);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bubble-cluster scattering laboratory"};
    app.require_subcommand(1);
    Common common;
    std::string table_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "experiment config (JSON)")->required();
        sub->add_option("--out", common.out, "output directory (overrides the config)");
        sub->add_option("--seed", common.seed, "placement seed (overrides the config)");
        return sub;
    };
    auto* regime = add_common(app.add_subcommand("regime-check", "classify the parameter set and print the ledger"));
    auto* cluster = add_common(app.add_subcommand("cluster", "build one cluster and write cluster.json"));
    auto* fl = add_common(app.add_subcommand("solve-fl", "Foldy-Lax charges and far field for one a"));
    auto* ls = add_common(app.add_subcommand("solve-ls", "volume integral equation for the effective medium"));
    auto* sie = add_common(app.add_subcommand("solve-sie", "surface integral equation for the effective metasurface"));
    auto* bem = add_common(app.add_subcommand("solve-bem", "sound-soft boundary of the cluster support"));
    auto* converge = add_common(app.add_subcommand("converge", "error table over the a-sequence"));
    auto* fit = add_common(app.add_subcommand("fit", "rate fit of an existing error table"));
    for (auto* sub : {cluster, fl, ls, sie, bem}) sub->add_option("--a", common.a, "bubble radius (default: first of a_sequence)");
    for (auto* sub : {ls, sie}) sub->add_option("--h-star", common.h_star, "damping parameter h_*");
    fit->add_option("--table", table_path, "error_table.csv to fit (default: <out>/error_table.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n\n", e.what());
        const CLI::App* failed = &app;
        for (auto* sub : app.get_subcommands()) failed = sub;
        std::fprintf(stderr, "%s", failed->help().c_str());
        return exit_usage;
    }

    try {
        if (regime->parsed()) return cmd_regime(common);
        if (cluster->parsed()) return cmd_cluster(common);
        if (fl->parsed()) return cmd_fl(common);
        if (ls->parsed()) return cmd_ls(common);
        if (sie->parsed()) return cmd_sie(common);
        if (bem->parsed()) return cmd_bem(common);
        if (converge->parsed()) return cmd_converge(common);
        if (fit->parsed()) return cmd_fit(common, table_path);
    } catch (const ConfigStageError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const bl::Error& e) {
        std::fprintf(stderr, "%s error: %s\n", std::string(bl::to_string(e.kind())).c_str(), e.what());
        return e.is_config() ? exit_config : exit_solver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_solver;
    }
    return exit_usage;
}
