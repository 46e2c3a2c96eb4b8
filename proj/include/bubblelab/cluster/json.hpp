#pragma once

#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/core/error.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace bubblelab {

inline nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

inline Vec3 json_vec(const nlohmann::json& j) {
    require(j.is_array() && j.size() == 3, ErrorKind::io, "expected a 3-vector");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline nlohmann::json cluster_to_json(const Cluster& c) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(c.kind));
    j["a"] = c.a;
    j["s"] = c.s;
    j["t"] = c.t;
    j["d_min"] = c.d_min;
    j["max_count"] = c.max_count;
    j["domain_measure"] = c.domain_measure;
    j["dropped_measure"] = c.dropped_measure;
    j["boundary_measure"] = c.boundary_measure;
    j["dropped_cells"] = c.dropped_cells;
    j["box_lo"] = vec_json(c.box_lo);
    j["box_hi"] = vec_json(c.box_hi);
    auto& centers = j["centers"] = nlohmann::json::array();
    for (const auto& z : c.centers) centers.push_back(vec_json(z));
    if (!c.normals.empty()) {
        auto& normals = j["normals"] = nlohmann::json::array();
        for (const auto& n : c.normals) normals.push_back(vec_json(n));
    }
    auto& cells = j["cells"] = nlohmann::json::array();
    auto& counts = j["counts"] = nlohmann::json::array();
    for (const auto& cell : c.cells) {
        nlohmann::json e;
        e["center"] = vec_json(cell.center);
        e["measure"] = cell.measure;
        e["side"] = cell.side;
        e["radius"] = cell.radius;
        e["count"] = cell.count;
        e["first"] = cell.first;
        e["K"] = cell.K;
        if (c.kind == Cluster::Kind::surface) e["param"] = cell.param;
        cells.push_back(std::move(e));
        counts.push_back(cell.count);
    }
    return j;
}

inline Cluster cluster_from_json(const nlohmann::json& j) {
    try {
        Cluster c;
        c.kind = j.at("kind").get<std::string>() == "surface" ? Cluster::Kind::surface : Cluster::Kind::volumetric;
        c.a = j.at("a").get<double>();
        c.s = j.at("s").get<double>();
        c.t = j.at("t").get<double>();
        c.d_min = j.value("d_min", 0.5);
        c.max_count = j.value("max_count", 1);
        c.domain_measure = j.value("domain_measure", 0.0);
        c.dropped_measure = j.value("dropped_measure", 0.0);
        c.boundary_measure = j.value("boundary_measure", 0.0);
        c.dropped_cells = j.value("dropped_cells", 0);
        if (j.contains("box_lo")) c.box_lo = json_vec(j["box_lo"]);
        if (j.contains("box_hi")) c.box_hi = json_vec(j["box_hi"]);
        for (const auto& z : j.at("centers")) c.centers.push_back(json_vec(z));
        if (j.contains("normals"))
            for (const auto& n : j["normals"]) c.normals.push_back(json_vec(n));
        if (j.contains("cells"))
            for (const auto& e : j["cells"]) {
                Cell cell;
                cell.center = json_vec(e.at("center"));
                cell.measure = e.at("measure").get<double>();
                cell.side = e.value("side", std::cbrt(cell.measure));
                cell.radius = e.value("radius", 0.0);
                cell.count = e.at("count").get<int>();
                cell.first = e.at("first").get<int>();
                cell.K = e.value("K", 0.0);
                if (e.contains("param")) cell.param = e["param"].get<std::array<double, 4>>();
                c.cells.push_back(cell);
            }
        return c;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io, std::string("malformed cluster JSON: ") + e.what());
    }
}

inline void write_cluster_json(const std::string& path, const Cluster& c) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path);
    os << cluster_to_json(c).dump(1) << '\n';
}

inline Cluster read_cluster_json(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io, "cannot parse " + path + ": " + e.what());
    }
    return cluster_from_json(j);
}

} // namespace bubblelab
