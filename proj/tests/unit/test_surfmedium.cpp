#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/geometry/generators.hpp"
#include "bubblelab/harness/rate_fit.hpp"
#include "bubblelab/surfmedium/chart_mesh.hpp"
#include "bubblelab/surfmedium/surface_solver.hpp"

#include "oracles/series.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace bubblelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// int_square 1/(4 pi |y|) for a square of side g seen from its center,
// eight polar wedges integrated in angle by Gauss-Legendre.
double square_self_oracle(double g) {
    const auto q = quad::gauss_legendre(40, 0.0, pi / 4.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * 0.5 * g / std::cos(q.nodes[i]);
    return 8.0 * s / (4.0 * pi);
}

FarField series_far(double sigma, double R, const std::vector<Vec3>& dirs) {
    const auto b = oracle::transmission_sphere_coefficients(1.0, sigma, R);
    FarField ff;
    ff.directions = dirs;
    for (const auto& d : dirs) ff.values.push_back(oracle::far_from_coefficients(b, 1.0, d.z()));
    return ff;
}

const IncidentWave inc{1.0, Vec3::UnitZ()};

} // namespace

TEST_CASE("square panel self integral", "[surfmedium]") {
    for (double g : {1.0, 0.1}) {
        const auto sq = geom::rectangle(Vec3::Zero(), Vec3::UnitZ(), 0.5 * g, 0.5 * g, 1, 1);
        const cplx w = self_panel_weight(sq, 0, 0.0);
        CHECK_THAT(w.real(), WithinRel(square_self_oracle(g), 1e-6));
        CHECK_THAT(w.real() / g, WithinRel(0.2806, 1e-3));
    }
    const double g = 0.01, k = 0.7;
    const auto sq = geom::rectangle(Vec3::Zero(), Vec3::UnitZ(), 0.5 * g, 0.5 * g, 1, 1);
    CHECK_THAT(self_panel_weight(sq, 0, k).imag(), WithinRel(k * g * g / (4.0 * pi), 1e-3));
}

TEST_CASE("zero sigma leaves the incident wave", "[surfmedium]") {
    const auto mesh = geom::icosphere(3);
    const auto sol = assemble_and_solve_surface(mesh, std::vector<double>(mesh.size(), 0.0), 1.0, inc);
    for (std::size_t i = 0; i < mesh.size(); ++i) CHECK(std::abs(sol.Y[static_cast<Eigen::Index>(i)] - inc(mesh[i].centroid)) < 1e-14);
    CHECK(far_field_surface(sol, mesh, 1.0, fibonacci_sphere(20)).max_abs() == 0.0);
    const auto jr = jump_check(sol, mesh, inc);
    // only the one-sided extrapolation error of the smooth incident wave remains
    CHECK(jr.jump_u < 5e-3);
    CHECK(jr.jump_dn < 5e-3);
}

TEST_CASE("sphere with constant sigma against the transmission series", "[surfmedium]") {
    const auto mesh = geom::icosphere(3);
    const auto dirs = fibonacci_sphere(100);
    for (double sigma : {2.0, -1.5}) {
        const auto sol = assemble_and_solve_surface(mesh, std::vector<double>(mesh.size(), sigma), 1.0, inc);
        CHECK(relative_sup_error(far_field_surface(sol, mesh, 1.0, dirs), series_far(sigma, 1.0, dirs)) <= 0.02);
        // total field on the sphere against the series
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < mesh.size(); i += 13) {
            const Vec3 c = mesh[i].centroid;
            const cplx ref = oracle::transmission_sphere_field(1.0, sigma, 1.0, 1.0, c.z() / c.norm());
            worst = std::max(worst, std::abs(sol.Y[static_cast<Eigen::Index>(i)] - ref));
            scale = std::max(scale, std::abs(ref));
        }
        CHECK(worst <= 0.03 * scale);
    }
}

TEST_CASE("jump check on the sphere benchmark", "[surfmedium]") {
    const auto mesh = geom::icosphere(3);
    const double sigma = 2.0;
    const auto sol = assemble_and_solve_surface(mesh, std::vector<double>(mesh.size(), sigma), 1.0, inc);
    const auto jr = jump_check(sol, mesh, inc);
    CHECK(jr.jump_u <= 0.05);
    CHECK(jr.jump_dn <= 0.05);
    CHECK(jr.jump_dn_flipped > jr.jump_dn);
    CHECK(jr.sign_agreement >= 0.9);
}

TEST_CASE("surface norm decays like 1/h_star for large damping", "[surfmedium]") {
    const auto mesh = geom::icosphere(2);
    const std::vector<double> sigma(mesh.size(), 1.0);
    std::vector<double> hs{1e2, 3e2, 1e3}, norms;
    double prev = std::numeric_limits<double>::infinity();
    for (double h : hs) {
        norms.push_back(surface_l2_norm(assemble_and_solve_surface(mesh, sigma, h, inc), mesh));
        CHECK(norms.back() < prev);
        prev = norms.back();
    }
    CHECK_THAT(fit_rate(hs, norms).slope, WithinAbs(-1.0, 0.05));
}

TEST_CASE("open chart meshes", "[surfmedium]") {
    const auto cap = Chart::sphere(Vec3::Zero(), 0.5, 0.0, pi / 3.0);
    ChartMeshOptions opt;
    opt.cells = 24;
    const auto m = chart_mesh(cap, opt);
    CHECK_FALSE(m.is_closed());
    CHECK_THAT(m.total_area(), WithinRel(cap.total_area(), 0.02));
    CHECK_THAT(cap.total_area(), WithinRel(2.0 * pi * 0.25 * (1.0 - std::cos(pi / 3.0)), 1e-8));
    for (const auto& p : m.panels()) CHECK(p.normal.dot(p.centroid) > 0.0);

    const auto sphere = Chart::sphere(Vec3(1, 0, 0), 2.0, 0.0, pi);
    const auto ms = chart_mesh(sphere, opt);
    CHECK(ms.is_closed());
    CHECK_THAT(ms.total_area(), WithinRel(16.0 * pi, 0.01));

    const auto disk = Chart::plane_disk(Vec3::Zero(), Vec3::UnitZ(), 1.0);
    CHECK_THAT(chart_mesh(disk, opt).total_area(), WithinRel(pi, 0.01));
}

TEST_CASE("surface solver rejects bad input", "[surfmedium]") {
    const auto mesh = geom::icosphere(1);
    CHECK(throws_kind([&] { assemble_and_solve_surface(mesh, std::vector<double>(3, 1.0), 1.0, inc); }, ErrorKind::config));
    CHECK(throws_kind([&] { assemble_and_solve_surface(mesh, std::vector<double>(mesh.size(), 1.0), 0.0, inc); }, ErrorKind::config));
}
