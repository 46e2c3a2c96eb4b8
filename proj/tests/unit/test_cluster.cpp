#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/cluster/density.hpp"
#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/cluster/json.hpp"
#include "bubblelab/cluster/surface.hpp"
#include "bubblelab/cluster/validate.hpp"
#include "bubblelab/cluster/volumetric.hpp"
#include "bubblelab/harness/rate_fit.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace bubblelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Domain cube = Domain::box(Vec3::Constant(-0.5), Vec3::Constant(0.5));

bool all_pass(const DiagnosticsReport& r) {
    for (const auto& c : r.checks)
        if (!c.passed) return false;
    return !r.checks.empty();
}

bool check_passed(const DiagnosticsReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c.passed;
    FAIL("no check named " << name);
    return false;
}

} // namespace

TEST_CASE("periodic unit cube gives 1000 cells of side 0.1", "[cluster]") {
    const auto c = build_volumetric(cube, DensityField::constant(0.0), 1e-3, 1.0, 0.4, 3);
    REQUIRE(c.size() == 1000);
    REQUIRE(c.cells.size() == 1000);
    CHECK(c.dropped_cells == 0);
    for (const auto& cell : c.cells) {
        CHECK_THAT(cell.side, WithinRel(0.1, 1e-9));
        CHECK(cell.count == 1);
        CHECK((c.centers[static_cast<std::size_t>(cell.first)] - cell.center).norm() < 1e-15);
        // cell centers sit on the 0.05 + 0.1 k grid
        for (int k = 0; k < 3; ++k) {
            const double f = (cell.center[k] + 0.5) / 0.1 - 0.5;
            CHECK_THAT(f, WithinAbs(std::round(f), 1e-9));
        }
    }
    CHECK_THAT(min_pairwise_distance(c.centers, 0.2), WithinRel(0.1, 1e-9));
    CHECK(all_pass(validate(c, &cube)));
}

TEST_CASE("constant K = 1.5 puts two centers in cells of volume 0.8 a^s", "[cluster]") {
    const double a = 1e-3;
    const auto c = build_volumetric(cube, DensityField::constant(1.5), a, 1.0, 0.4, 5);
    REQUIRE(!c.cells.empty());
    for (const auto& cell : c.cells) {
        CHECK(cell.count == 2);
        CHECK_THAT(cell.measure, WithinRel(a * 2.0 / 2.5, 1e-9));
    }
    CHECK(c.size() == 2 * c.cells.size());
    CHECK(all_pass(validate(c, &cube)));
}

TEST_CASE("dropped boundary volume scales like a^{s/3}", "[cluster]") {
    const auto ball = Domain::ball(Vec3::Zero(), 1.0);
    std::vector<double> as{1e-2, 1e-3}, dropped;
    for (double a : as) dropped.push_back(build_volumetric(ball, DensityField::constant(0.0), a, 1.0, 0.4, 1).dropped_measure);
    const double slope = std::log(dropped[0] / dropped[1]) / std::log(as[0] / as[1]);
    CHECK_THAT(slope, WithinAbs(1.0 / 3.0, 0.1));
}

TEST_CASE("infeasible spacing and placement failures", "[cluster]") {
    CHECK(throws_kind([] { build_volumetric(cube, DensityField::constant(0.0), 1e-3, 1.0, 0.2, 1); }, ErrorKind::infeasible));
    PlacementOptions tight;
    tight.d_min = 5.0;
    CHECK(throws_kind([&] { build_volumetric(cube, DensityField::constant(3.0), 1e-3, 1.0, 0.4, 1, tight); },
                      ErrorKind::placement));
}

TEST_CASE("flat unit square gives 100 squares of side 0.1", "[cluster]") {
    const auto sq = Chart::plane_rect(Vec3::Zero(), Vec3::UnitZ(), 0.5, 0.5);
    const auto c = build_surface(sq, DensityField::constant(0.0), 1e-2, 1.0, 0.5, 1);
    REQUIRE(c.cells.size() == 100);
    for (const auto& cell : c.cells) CHECK_THAT(cell.side, WithinRel(0.1, 1e-9));
    for (const auto& n : c.normals) CHECK((n - Vec3::UnitZ()).norm() < 1e-12);
    CHECK(all_pass(validate(c)));
}

TEST_CASE("upper hemisphere cells have area a^s by the metric", "[cluster]") {
    const double R = 1.0, a = 1e-2;
    const auto hemi = Chart::sphere(Vec3::Zero(), R, 0.0, pi / 2.0);
    const auto c = build_surface(hemi, DensityField::constant(0.0), a, 1.0, 0.5, 1);
    REQUIRE(c.cells.size() > 100);
    for (const auto& cell : c.cells) {
        const auto [u0, u1, v0, v1] = cell.param;
        const double area = R * R * (u1 - u0) * (std::cos(v0) - std::cos(v1));
        CHECK_THAT(area, WithinRel(a, 0.02));
        CHECK_THAT(cell.measure, WithinRel(area, 1e-6));
    }
    double total = c.dropped_measure;
    for (const auto& cell : c.cells) total += cell.measure;
    CHECK_THAT(total, WithinRel(2.0 * pi * R * R, 1e-6));
}

TEST_CASE("validate flags coincident centers and density rejects negatives", "[cluster]") {
    auto c = build_volumetric(cube, DensityField::constant(0.0), 1e-3, 1.0, 0.4, 3);
    CHECK(check_passed(validate(c), "min_distance"));
    c.centers[1] = c.centers[0];
    CHECK_FALSE(check_passed(validate(c), "min_distance"));

    CHECK(throws_kind([] { DensityField::grid(Vec3::Zero(), Vec3::Constant(0.5), {2, 1, 1}, {0.5, -0.1}); }, ErrorKind::config));
    CHECK(throws_kind([] { DensityField::constant(-1.0); }, ErrorKind::config));
}

TEST_CASE("graded density follows the samples", "[cluster]") {
    const auto K = DensityField::grid(Vec3(-0.5, -0.5, -0.5), Vec3(1.0, 1.0, 1.0), {2, 1, 1}, {0.0, 2.0});
    const auto c = build_volumetric(cube, K, 1e-3, 1.0, 0.4, 9);
    CHECK(c.max_count == 3);
    int left = 0, right = 0;
    for (const auto& cell : c.cells) {
        CHECK(cell.count == static_cast<int>(std::floor(cell.K)) + 1);
        (cell.center.x() < 0 ? left : right) += cell.count;
    }
    CHECK(right > left);
    CHECK(all_pass(validate(c, &cube)));
}

TEST_CASE("clusters are deterministic and survive a JSON roundtrip", "[cluster]") {
    const auto K = DensityField::constant(2.3);
    const auto c1 = build_volumetric(cube, K, 2e-3, 1.0, 0.4, 42);
    const auto c2 = build_volumetric(cube, K, 2e-3, 1.0, 0.4, 42);
    const auto c3 = build_volumetric(cube, K, 2e-3, 1.0, 0.4, 43);
    CHECK(cluster_to_json(c1).dump() == cluster_to_json(c2).dump());
    CHECK(cluster_to_json(c1).dump() != cluster_to_json(c3).dump());

    const auto back = cluster_from_json(cluster_to_json(c1));
    REQUIRE(back.size() == c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) CHECK(back.centers[i] == c1.centers[i]);
    CHECK(back.cells.size() == c1.cells.size());
    CHECK(cluster_to_json(back).dump() == cluster_to_json(c1).dump());

    const auto dir = scratch_dir("cluster_json");
    write_cluster_json((dir / "c.json").string(), c1);
    CHECK(cluster_to_json(read_cluster_json((dir / "c.json").string())).dump() == cluster_to_json(c1).dump());
}
