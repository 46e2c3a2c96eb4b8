#include "bubblelab/bemlimit/dirichlet.hpp"
#include "bubblelab/geometry/generators.hpp"

#include "oracles/series.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace bubblelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FarField soft_oracle(double kappa, double R, const std::vector<Vec3>& dirs, const Vec3& theta) {
    const auto b = oracle::soft_sphere_coefficients(kappa, R);
    FarField ff;
    ff.directions = dirs;
    for (const auto& d : dirs) ff.values.push_back(oracle::far_from_coefficients(b, kappa, d.dot(theta)));
    return ff;
}

} // namespace

TEST_CASE("Mie series against the independent recurrences", "[bemlimit]") {
    const auto dirs = fibonacci_sphere(60);
    for (double kr : {0.3, 1.0, 4.0, 12.0}) {
        const Vec3 th = Vec3(1, -2, 0.5).normalized();
        CHECK(relative_sup_error(mie_soft_sphere(kr, 1.0, dirs, th), soft_oracle(kr, 1.0, dirs, th)) <= 1e-10);
    }
}

TEST_CASE("Mie long-wavelength limit is a monopole", "[bemlimit]") {
    const double r = 0.5, kappa = 0.1; // kappa r = 0.05
    const auto ff = mie_soft_sphere(kappa, r, fibonacci_sphere(50));
    double lo = 1e300, hi = 0.0;
    for (const auto& v : ff.values) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
        CHECK_THAT(v.real(), WithinRel(-4.0 * pi * r, 0.06));
    }
    CHECK((hi - lo) / hi <= 0.01);
}

TEST_CASE("Mie reciprocity", "[bemlimit]") {
    const Vec3 th = Vec3(0.2, 0.3, 0.9).normalized(), xh = Vec3(-1, 0.4, 0.1).normalized();
    const cplx f = mie_soft_sphere(2.5, 1.0, {xh}, th).values[0];
    const cplx b = mie_soft_sphere(2.5, 1.0, {-th}, -xh).values[0];
    CHECK(std::abs(f - b) <= 1e-14 * std::abs(f));
}

TEST_CASE("sound-soft sphere by collocation", "[bemlimit]") {
    const auto mesh = geom::icosphere(3, 1.0, Vec3::Zero());
    const auto dirs = fibonacci_sphere(100);
    const IncidentWave inc{1.0, Vec3::UnitZ()};
    const auto sol = solve_dirichlet(mesh, inc, dirs);
    CHECK(relative_sup_error(sol.far, soft_oracle(1.0, 1.0, dirs, inc.theta)) <= 0.02);
    CHECK(sol.residual <= 1e-10);
    // the single-layer field cancels u^I inside the sphere
    for (const Vec3& x : {Vec3(0, 0, 0.3), Vec3(-0.4, 0.2, 0.1)}) CHECK(std::abs(dirichlet_scattered(sol, mesh, 1.0, x) + inc(x)) <= 0.02);
    const Vec3 xhat = Vec3(1, 1, 1).normalized();
    const double R = 1e4;
    const cplx lim = 4.0 * pi * R * std::exp(-I * R) * dirichlet_scattered(sol, mesh, 1.0, R * xhat);
    const cplx ff = dirichlet_far_field(sol.density, mesh, 1.0, {xhat}).values[0];
    CHECK(std::abs(lim - ff) <= 1e-3 * std::abs(ff));
}

TEST_CASE("collocation reciprocity on a cube", "[bemlimit]") {
    const auto mesh = geom::box_surface(6);
    const Vec3 th = Vec3(0.3, 0.1, 1).normalized(), xh = Vec3(1, -0.5, 0.2).normalized();
    const cplx f = solve_dirichlet(mesh, IncidentWave{1.5, th}, {xh}).far.values[0];
    const cplx b = solve_dirichlet(mesh, IncidentWave{1.5, -xh}, {-th}).far.values[0];
    CHECK(std::abs(f - b) <= 1e-2 * std::abs(f));
}

TEST_CASE("open disk crack matches the electrostatic capacity", "[bemlimit]") {
    // low-frequency far field of a sound-soft screen is minus its capacity, 8 R for a disk
    const double R = 1.0;
    geom::DiskMeshOptions opt;
    opt.uniform_rings = 6;
    opt.grading_levels = 4;
    const auto mesh = geom::graded_disk(R, Vec3::Zero(), Vec3::UnitZ(), opt);
    CHECK_FALSE(mesh.is_closed());
    const auto sol = solve_dirichlet(mesh, IncidentWave{0.02, Vec3::UnitZ()}, fibonacci_sphere(10));
    for (const auto& v : sol.far.values) CHECK_THAT(v.real(), WithinRel(-8.0 * R, 0.03));
}

TEST_CASE("interior eigenvalue handling", "[bemlimit]") {
    CHECK(near_sphere_dirichlet_eigenvalue(pi, 1.0));
    CHECK(near_sphere_dirichlet_eigenvalue(4.493409457909064, 1.0));
    CHECK_FALSE(near_sphere_dirichlet_eigenvalue(1.0, 1.0));

    const auto mesh = geom::icosphere(2);
    DirichletOptions strict;
    strict.max_condition = 1.0;
    CHECK(throws_kind([&] { solve_dirichlet(mesh, IncidentWave{}, {Vec3::UnitZ()}, strict); }, ErrorKind::near_singular));
    const double c_away = solve_dirichlet(mesh, IncidentWave{1.0, Vec3::UnitZ()}, {}).cond_estimate;
    const double c_near = solve_dirichlet(mesh, IncidentWave{pi, Vec3::UnitZ()}, {}).cond_estimate;
    CHECK(c_near > c_away);
}
