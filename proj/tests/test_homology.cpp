#include <doctest.h>

#include "legtk/fixtures.hpp"
#include "legtk/homology.hpp"

using namespace legtk;

namespace {
HomologyConfig fast_cfg() {
    HomologyConfig cfg;
    cfg.resolution = 256;
    return cfg;
}
}  // namespace

TEST_CASE("euler rank oracle on the fixture suite") {
    CHECK(euler_rank(fixtures::disc()) == 0);
    CHECK(euler_rank(fixtures::annulus()) == 1);
    CHECK(euler_rank(fixtures::pair_of_pants()) == 2);
    CHECK(euler_rank(fixtures::two_islands_three_bridges()) == 2);
    CHECK(euler_rank(fixtures::three_island_chain()) == 1);
    CHECK(euler_rank(fixtures::free_circle()) == 1);
}

TEST_CASE("bridge coloring: spanning tree is black, the rest red") {
    auto chain = fixtures::three_island_chain();
    auto col = classify_bridges(chain);
    CHECK(col.black == std::vector<int>{0, 1});
    CHECK(col.red == std::vector<int>{2});

    auto fig = fixtures::two_islands_three_bridges();
    auto colf = classify_bridges(fig);
    CHECK(colf.black.size() == 1);
    CHECK(colf.red.size() == 2);
}

TEST_CASE("basis rank matches the Euler count") {
    for (auto make : {fixtures::disc, fixtures::annulus, fixtures::pair_of_pants,
                      fixtures::two_islands_three_bridges, fixtures::three_island_chain,
                      fixtures::free_circle}) {
        auto S = make();
        auto basis = build_homology_basis(S, fast_cfg());
        CHECK(static_cast<int>(basis.cycles.size()) == euler_rank(S));
        CHECK(basis.runge_certified);
        for (const auto& c : basis.cycles) {
            CHECK(c.closed);
            // each cycle passes through the base point
            double d = std::abs(c.eval(0.0) - basis.base_point);
            CHECK(d < 1e-9);
        }
    }
}

TEST_CASE("cycles stay inside the set") {
    auto S = fixtures::pair_of_pants();
    auto basis = build_homology_basis(S, fast_cfg());
    for (const auto& c : basis.cycles)
        for (int k = 0; k < 256; ++k)
            CHECK(S.distance(c.eval(k / 256.0)) < 1e-9);
}

TEST_CASE("runge check flags a separating curve") {
    auto S = fixtures::disc();
    // a circle strictly inside the disc neighborhood separates it
    auto sep = PiecewiseCurve::circle(0.0, 0.5);
    CHECK_FALSE(runge_check(S, {&sep}, 0.3, 256, Exec::Serial));
    // a radial slit does not separate
    auto slit = PiecewiseCurve::segment(0.0, cplx(0.5, 0.0));
    CHECK(runge_check(S, {&slit}, 0.3, 256, Exec::Serial));
}

TEST_CASE("runge check demands adequate resolution") {
    auto S = fixtures::disc();
    auto slit = PiecewiseCurve::segment(0.0, cplx(0.5, 0.0));
    CHECK_THROWS_AS((void)runge_check(S, {&slit}, 0.01, 64, Exec::Serial), ResolutionTooCoarse);
}

TEST_CASE("raster fill serial and parallel agree bitwise") {
    auto S = fixtures::pair_of_pants();
    auto gs = rasterize_region(S, 0.25, 384, Exec::Serial);
    auto gp = rasterize_region(S, 0.25, 384, Exec::Parallel);
    CHECK(gs.cells == gp.cells);
}

TEST_CASE("curve family splits at interpolation points and stays connected") {
    auto S = fixtures::annulus();
    std::vector<cplx> A = {cplx(1.5, 0.3), cplx(-1.0, 0.8)};
    auto family = curve_family_with_interpolation(S, A, fast_cfg());
    CHECK(family.connected);
    CHECK(family.runge_certified);
    CHECK(family.members.size() >= 2);
    // every interpolation point lies on some member endpoint
    for (const auto& a : family.interp_points) {
        double best = 1e9;
        for (const auto& m : family.members) {
            best = std::min(best, std::abs(m.curve.start() - a));
            best = std::min(best, std::abs(m.curve.end() - a));
        }
        CHECK(best < 1e-6);
    }
}

TEST_CASE("private arcs avoid the other cycles") {
    auto S = fixtures::two_islands_three_bridges();
    auto basis = build_homology_basis(S, fast_cfg());
    REQUIRE(basis.cycles.size() == 2);
    for (size_t i = 0; i < basis.cycles.size(); ++i) {
        auto [lo, hi] = basis.private_arcs[i];
        for (int k = 0; k <= 64; ++k) {
            cplx p = basis.cycles[i].eval(lo + (hi - lo) * k / 64.0);
            for (size_t j = 0; j < basis.cycles.size(); ++j) {
                if (j == i) continue;
                CHECK(point_to_polyline_distance(p, basis.cycles[j].dense_polyline(), true) >
                      1e-3);
            }
        }
    }
}
