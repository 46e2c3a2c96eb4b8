#pragma once

#include "bubblelab/cluster/density.hpp"
#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"
#include "bubblelab/geometry/mesh.hpp"
#include "bubblelab/model/bubble.hpp"
#include "bubblelab/model/contrast.hpp"
#include "bubblelab/model/effective.hpp"
#include "bubblelab/model/regime.hpp"
#include "bubblelab/surfmedium/chart_mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace bubblelab {

using nlohmann::json;

enum class GeometryKind { volumetric, surface };

struct Tolerances {
    std::size_t max_bubbles = 4096;
    std::size_t fl_dense_max = 8192;
    double gmres_tol = 1e-10;
    double d_min = 0.5;  // minimum distance d_min * a^t
    int placement_attempts = 100;
};

struct ComparatorSettings {
    int voxels = 40;         // voxel cells along the longest extent of Omega
    int mesh_level = 3;      // icosphere / box refinement for Dirichlet boundaries
    ChartMeshOptions chart{}; // surface comparator meshes
    double layer_near_factor = 4.0;
};

struct ExperimentConfig {
    GeometryKind kind = GeometryKind::volumetric;
    std::optional<Domain> domain;
    std::optional<Chart> chart;
    DensityField K = DensityField::constant(0.0);
    BubbleSpec bubble;
    ContrastParams contrast;
    std::optional<double> omega_ratio; // omega / omega_bar_M, resolved into contrast.omega
    std::string regime = "auto";
    std::vector<double> a_sequence;
    std::size_t directions = 200;
    Vec3 theta = Vec3::UnitZ();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Tolerances tol;
    ComparatorSettings comparator;
    std::uint64_t seed = 1;
    std::string out = "out";
    bool deterministic = true;
    json raw;

    bool near_resonance() const { return contrast.near_resonance(); }

    /// Regime used for this geometry kind.
    Regime regime_of(const RegimeReport& rep) const { return kind == GeometryKind::surface ? rep.surface_regime : rep.regime; }
};

namespace detail {

inline Vec3 cfg_vec(const json& j, const char* key, const Vec3& def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    require(v.is_array() && v.size() == 3, ErrorKind::config, std::string("'") + key + "' must be a 3-vector");
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

inline Vec3 cfg_vec(const json& j, const char* key) {
    require(j.contains(key), ErrorKind::config, std::string("missing key '") + key + "'");
    return cfg_vec(j, key, Vec3::Zero());
}

inline double cfg_num(const json& j, const char* key) {
    require(j.contains(key) && j.at(key).is_number(), ErrorKind::config, std::string("missing numeric key '") + key + "'");
    return j.at(key).get<double>();
}

inline Domain parse_domain(const json& d) {
    const std::string type = d.value("type", "box");
    if (type == "box") return Domain::box(cfg_vec(d, "lo"), cfg_vec(d, "hi"));
    if (type == "ball") return Domain::ball(cfg_vec(d, "center", Vec3::Zero()), cfg_num(d, "radius"));
    if (type == "box_union") {
        std::vector<std::pair<Vec3, Vec3>> boxes;
        for (const auto& b : d.at("boxes")) boxes.emplace_back(cfg_vec(b, "lo"), cfg_vec(b, "hi"));
        return Domain::box_union(std::move(boxes));
    }
    fail(ErrorKind::config, "unknown domain type '" + type + "'");
}

inline Chart parse_chart(const json& c) {
    const std::string type = c.value("type", "sphere");
    if (type == "sphere")
        return Chart::sphere(cfg_vec(c, "center", Vec3::Zero()), cfg_num(c, "radius"), c.value("theta0", 0.0), c.value("theta1", pi));
    if (type == "disk") return Chart::plane_disk(cfg_vec(c, "center", Vec3::Zero()), cfg_vec(c, "normal", Vec3::UnitZ()), cfg_num(c, "radius"));
    if (type == "rect")
        return Chart::plane_rect(cfg_vec(c, "center", Vec3::Zero()), cfg_vec(c, "normal", Vec3::UnitZ()), cfg_num(c, "hx"), cfg_num(c, "hy"));
    if (type == "graph") {
        const auto coef = c.at("coefficients").get<std::vector<double>>();
        require(coef.size() == 6, ErrorKind::config, "graph chart needs 6 coefficients");
        const auto box = c.at("box").get<std::vector<double>>();
        require(box.size() == 4, ErrorKind::config, "graph chart box is [x0, x1, y0, y1]");
        return Chart::graph({coef[0], coef[1], coef[2], coef[3], coef[4], coef[5]}, box[0], box[1], box[2], box[3]);
    }
    fail(ErrorKind::config, "unknown chart type '" + type + "'");
}

inline DensityField parse_density(const json& g, double lambda) {
    if (!g.contains("K")) return DensityField::constant(0.0, lambda);
    const auto& k = g.at("K");
    if (k.is_number()) return DensityField::constant(k.get<double>(), lambda);
    const auto dims = k.at("dims").get<std::array<int, 3>>();
    return DensityField::grid(cfg_vec(k, "origin"), cfg_vec(k, "spacing"), dims, k.at("samples").get<std::vector<double>>(), lambda);
}

inline BubbleSpec parse_bubble(const json& b, const std::filesystem::path& base) {
    const std::string shape = b.value("shape", "sphere");
    BubbleSpec spec;
    if (shape == "sphere") {
        spec = BubbleSpec::unit_sphere(b.value("mesh_level", 3), b.value("exact_hat_A", true));
    } else if (shape == "cube") {
        spec = BubbleSpec::unit_cube(b.value("n", 8));
    } else if (shape == "mesh") {
        std::filesystem::path p = b.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        spec = BubbleSpec::from_mesh(geom::read_mesh(p.string()));
    } else {
        fail(ErrorKind::config, "unknown bubble shape '" + shape + "'");
    }
    if (b.contains("hat_A")) spec.hat_A_ref = cfg_num(b, "hat_A");
    spec.validate();
    return spec;
}

inline ContrastParams parse_contrast(const json& c) {
    ContrastParams p;
    p.rho0 = c.value("rho0", p.rho0);
    p.k0 = c.value("k0", p.k0);
    p.C_rho = c.value("C_rho", p.C_rho);
    p.gamma = c.value("gamma", p.gamma);
    p.tau = c.value("tau", p.tau);
    p.omega = c.value("omega", p.omega);
    p.s = cfg_num(c, "s");
    p.t = cfg_num(c, "t");
    if (c.contains("h1")) p.h1 = cfg_num(c, "h1");
    if (c.contains("l_M")) p.l_M = cfg_num(c, "l_M");
    p.lambda_K = c.value("lambda", c.value("lambda_K", p.lambda_K));
    p.eta = c.value("eta", p.eta);
    p.l0 = c.value("l0", p.l0);
    return p;
}

inline Eigen::Matrix3d parse_rotation(const json& j) {
    if (!j.contains("rotation")) return Eigen::Matrix3d::Identity();
    const auto& r = j.at("rotation");
    const Vec3 axis = cfg_vec(r, "axis");
    require(axis.norm() > 0.0, ErrorKind::config, "rotation axis must be non-zero");
    return Eigen::AngleAxisd(cfg_num(r, "angle"), axis.normalized()).toRotationMatrix();
}

} // namespace detail

/// Parses and validates a config; `base` resolves relative mesh paths.
inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base = ".") {
    try {
        ExperimentConfig cfg;
        cfg.raw = j;
        require(j.is_object(), ErrorKind::config, "config must be a JSON object");
        for (const char* key : {"geometry", "contrast", "a_sequence"})
            require(j.contains(key), ErrorKind::config, std::string("config is missing '") + key + "'");
        for (auto it = j.begin(); it != j.end(); ++it) {
            static const std::vector<std::string> known{"geometry", "bubble",  "contrast", "regime", "a_sequence", "directions",
                                                        "incident", "tolerances", "comparator", "seed", "out", "deterministic",
                                                        "rotation", "description"};
            require(std::find(known.begin(), known.end(), it.key()) != known.end(), ErrorKind::config,
                    "unknown config key '" + it.key() + "'");
        }

        const auto& g = j.at("geometry");
        const std::string kind = g.value("kind", "volumetric");
        cfg.contrast = detail::parse_contrast(j.at("contrast"));
        if (kind == "volumetric") {
            cfg.kind = GeometryKind::volumetric;
            cfg.domain = detail::parse_domain(g.at("domain"));
        } else if (kind == "surface") {
            cfg.kind = GeometryKind::surface;
            cfg.chart = detail::parse_chart(g.at("chart"));
        } else {
            fail(ErrorKind::config, "geometry kind must be 'volumetric' or 'surface'");
        }
        cfg.K = detail::parse_density(g, cfg.contrast.lambda_K);
        cfg.bubble = detail::parse_bubble(j.value("bubble", json::object()), base);

        const auto& c = j.at("contrast");
        if (c.contains("omega_ratio")) {
            require(!c.contains("omega"), ErrorKind::config, "give either omega or omega_ratio");
            require(!cfg.contrast.near_resonance(), ErrorKind::config, "omega_ratio is for away-from-resonance runs");
            cfg.omega_ratio = detail::cfg_num(c, "omega_ratio");
            require(*cfg.omega_ratio > 0.0, ErrorKind::config, "omega_ratio must be positive");
            const double wb2 = -8.0 * pi * cfg.contrast.k_bar() / (cfg.contrast.rho0 * cfg.bubble.hat_A());
            cfg.contrast.omega = *cfg.omega_ratio * std::sqrt(wb2);
        }
        cfg.contrast.validate();

        cfg.a_sequence = j.at("a_sequence").get<std::vector<double>>();
        require(cfg.a_sequence.size() >= 3, ErrorKind::config, "a_sequence needs at least 3 entries");
        for (std::size_t i = 0; i < cfg.a_sequence.size(); ++i) {
            require(cfg.a_sequence[i] > 0.0, ErrorKind::config, "a_sequence entries must be positive");
            if (i) require(cfg.a_sequence[i] < cfg.a_sequence[i - 1], ErrorKind::config, "a_sequence must be strictly decreasing");
        }

        cfg.directions = j.value("directions", cfg.directions);
        require(cfg.directions >= 1, ErrorKind::config, "directions must be positive");
        if (j.contains("incident")) cfg.theta = detail::cfg_vec(j.at("incident"), "theta", cfg.theta);
        require(cfg.theta.norm() > 0.0, ErrorKind::config, "incident direction must be non-zero");
        cfg.theta.normalize();
        cfg.rotation = detail::parse_rotation(j);

        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            cfg.tol.max_bubbles = t.value("max_bubbles", cfg.tol.max_bubbles);
            cfg.tol.fl_dense_max = t.value("fl_dense_max", cfg.tol.fl_dense_max);
            cfg.tol.gmres_tol = t.value("gmres_tol", cfg.tol.gmres_tol);
            cfg.tol.d_min = t.value("d_min", cfg.tol.d_min);
            cfg.tol.placement_attempts = t.value("placement_attempts", cfg.tol.placement_attempts);
        }
        if (j.contains("comparator")) {
            const auto& m = j.at("comparator");
            cfg.comparator.voxels = m.value("voxels", cfg.comparator.voxels);
            cfg.comparator.mesh_level = m.value("mesh_level", cfg.comparator.mesh_level);
            cfg.comparator.chart.sphere_level = m.value("sphere_level", cfg.comparator.chart.sphere_level);
            cfg.comparator.chart.cells = m.value("cells", cfg.comparator.chart.cells);
            cfg.comparator.chart.disk.uniform_rings = m.value("disk_rings", cfg.comparator.chart.disk.uniform_rings);
            cfg.comparator.chart.disk.grading_levels = m.value("grading_levels", cfg.comparator.chart.disk.grading_levels);
            cfg.comparator.chart.disk.grading_factor = m.value("grading_factor", cfg.comparator.chart.disk.grading_factor);
            cfg.comparator.layer_near_factor = m.value("near_factor", cfg.comparator.layer_near_factor);
            require(cfg.comparator.voxels >= 2, ErrorKind::config, "comparator voxels must be at least 2");
        }
        cfg.seed = j.value("seed", cfg.seed);
        cfg.out = j.value("out", cfg.out);
        cfg.deterministic = j.value("deterministic", cfg.deterministic);
        cfg.regime = j.value("regime", cfg.regime);

        const RegimeReport rep = classify_regime(cfg.contrast);
        const Regime r = cfg.regime_of(rep);
        if (cfg.regime != "auto")
            require(cfg.regime == to_string(r), ErrorKind::config,
                    "configured regime '" + cfg.regime + "' disagrees with the classifier ('" + std::string(to_string(r)) + "')");
        return cfg;
    } catch (const json::exception& e) {
        fail(ErrorKind::config, std::string("malformed config: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::config, "cannot open config " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::config, "cannot parse " + path + ": " + e.what());
    }
    return parse_config(j, std::filesystem::path(path).parent_path());
}

} // namespace bubblelab
