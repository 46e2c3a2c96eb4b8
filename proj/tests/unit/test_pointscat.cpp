#include "bubblelab/pointscat/foldy_lax.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace bubblelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed, double spread = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-spread, spread);
    std::vector<Vec3> z;
    for (std::size_t i = 0; i < n; ++i) z.emplace_back(U(rng), U(rng), U(rng));
    return z;
}

cplx phi(double kappa, double r) { return std::exp(I * kappa * r) / (4.0 * pi * r); }

} // namespace

TEST_CASE("assembled matrix entries", "[pointscat]") {
    const cplx C = -0.3;
    const double kappa = 2.0;
    const auto A1 = assemble({Vec3::Zero()}, C, kappa);
    REQUIRE(A1.rows() == 1);
    CHECK(std::abs(A1(0, 0) - 1.0 / C) < 1e-15);

    const double r = 0.7;
    const auto A2 = assemble({Vec3::Zero(), Vec3(0, r, 0)}, C, kappa);
    CHECK(std::abs(A2(0, 1) - phi(kappa, r)) < 1e-15);
    CHECK(A2(0, 1) == A2(1, 0));

    const double d = 0.25;
    const auto A3 = assemble({Vec3::Zero(), Vec3(d, 0, 0), Vec3(2 * d, 0, 0)}, C, kappa);
    CHECK(std::abs(A3(0, 2) - std::exp(I * kappa * 2.0 * d) / (8.0 * pi * d)) < 1e-14);

    CHECK(throws_kind([&] { assemble({Vec3::Zero(), Vec3::Zero()}, C, kappa); }, ErrorKind::singular_kernel));
}

TEST_CASE("single and symmetric pair charges", "[pointscat]") {
    const cplx C = -0.05;
    for (const Vec3& th : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.6, 0, 0.8)}) {
        const auto s = solve_foldy_lax({Vec3::Zero()}, C, IncidentWave{1.5, th});
        CHECK(std::abs(s.Q[0] + C) < 1e-16);
    }
    // pair on the x axis, wave along z: u^I is 1 at both centers
    const double r = 0.4, kappa = 1.2;
    const std::vector<Vec3> z{Vec3(-r / 2, 0, 0), Vec3(r / 2, 0, 0)};
    const auto s = solve_foldy_lax(z, C, IncidentWave{kappa, Vec3::UnitZ()});
    const cplx q = -C / (1.0 + C * phi(kappa, r));
    CHECK(std::abs(s.Q[0] - q) < 1e-14 * std::abs(q));
    CHECK(std::abs(s.Q[1] - q) < 1e-14 * std::abs(q));
}

TEST_CASE("dense and iterative solves agree with small residual", "[pointscat]") {
    const auto z = random_points(200, 11);
    const cplx C = -0.02;
    const IncidentWave inc{1.7, Vec3(0, 0.6, 0.8)};
    const auto dense = solve_foldy_lax(z, C, inc);
    CHECK(dense.direct);
    CHECK(dense.residual <= 1e-10);

    FoldyLaxOptions it;
    it.dense_max = 0;
    const auto iter = solve_foldy_lax(z, C, inc, it);
    CHECK_FALSE(iter.direct);
    CHECK(iter.iterations > 0);
    CHECK(iter.residual <= 1e-8);
    CHECK((iter.Q - dense.Q).norm() <= 1e-8 * dense.Q.norm());

    const auto small = random_points(20, 5);
    CHECK(solve_charges(assemble(small, C, 1.0), IncidentWave{}, small).residual <= 1e-10);
}

TEST_CASE("matrix-free apply matches the dense matrix", "[pointscat]") {
    const auto z = random_points(50, 3);
    const cplx C = -0.1;
    const auto A = assemble(z, C, 0.9);
    CVector x = CVector::Random(50), y;
    foldy_lax_apply(z, C, 0.9, x, y);
    CHECK((y - A * x).norm() <= 1e-12 * (A * x).norm());
}

TEST_CASE("far field of one bubble is constant", "[pointscat]") {
    const auto dirs = fibonacci_sphere(30);
    const auto s = solve_foldy_lax({Vec3::Zero()}, 2.0, IncidentWave{1.0, Vec3::UnitX()});
    const auto ff = far_field(s.Q, {Vec3::Zero()}, 1.0, dirs);
    for (const auto& v : ff.values) CHECK(std::abs(v - cplx(-2.0)) < 1e-15);
}

TEST_CASE("near field values and far-field limit", "[pointscat]") {
    const cplx C = 0.3;
    const double kappa = 1.1;
    const auto s = solve_foldy_lax({Vec3::Zero()}, C, IncidentWave{kappa, Vec3::UnitZ()});
    const Vec3 x(0.3, -0.2, 0.5);
    CHECK(std::abs(near_field(s.Q, {Vec3::Zero()}, kappa, x) + C * phi(kappa, x.norm())) < 1e-15);
    CHECK(near_field(CVector::Zero(1), {Vec3::Zero()}, kappa, x) == cplx(0.0));
    CHECK(throws_kind([&] { near_field(s.Q, {Vec3::Zero()}, kappa, Vec3::Zero()); }, ErrorKind::singular_kernel));

    const auto z = random_points(15, 8, 0.5);
    const auto sol = solve_foldy_lax(z, -0.05, IncidentWave{kappa, Vec3::UnitZ()});
    const Vec3 xhat = Vec3(1, 2, -1).normalized();
    const double R = 1e4;
    const cplx lim = 4.0 * pi * R * std::exp(-I * kappa * R) * near_field(sol.Q, z, kappa, R * xhat);
    const cplx ff = far_field(sol.Q, z, kappa, {xhat}).values[0];
    CHECK(std::abs(lim - ff) <= 1e-3 * std::abs(ff));
}

TEST_CASE("reciprocity and translation covariance", "[pointscat]") {
    const auto z = random_points(40, 21);
    const cplx C = -0.04;
    const double kappa = 1.4;
    const Vec3 th = Vec3(1, 1, 0).normalized(), xh = Vec3(0, -1, 2).normalized();
    const auto fwd = far_field(solve_foldy_lax(z, C, IncidentWave{kappa, th}).Q, z, kappa, {xh}).values[0];
    const auto bwd = far_field(solve_foldy_lax(z, C, IncidentWave{kappa, -xh}).Q, z, kappa, {-th}).values[0];
    CHECK(std::abs(fwd - bwd) <= 1e-10 * std::abs(fwd));

    const Vec3 b(2.0, -1.0, 0.5);
    std::vector<Vec3> zb;
    for (const auto& v : z) zb.push_back(v + b);
    const auto moved = far_field(solve_foldy_lax(zb, C, IncidentWave{kappa, th}).Q, zb, kappa, {xh}).values[0];
    CHECK(std::abs(moved - std::exp(I * kappa * (th - xh).dot(b)) * fwd) <= 1e-10 * std::abs(fwd));
}

TEST_CASE("cosine diagnostic of a pair", "[pointscat]") {
    const double d = 0.3, kappa = 2.0;
    CHECK_THAT(cosine_diagnostic({Vec3::Zero(), Vec3(d, 0, 0)}, kappa), WithinRel(std::cos(kappa * d), 1e-12));
}
