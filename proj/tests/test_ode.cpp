#include <doctest.h>

#include <cmath>
#include <random>

#include "legtk/ode.hpp"

using namespace legtk;

namespace {

CurveSamples unit_circle(int n = 256) {
    auto c = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, 1.0));
    return sample_curve(c, n);
}

CurveSamples segment(cplx a, cplx b, int n = 16) {
    auto c = std::make_shared<PiecewiseCurve>(PiecewiseCurve::segment(a, b));
    return sample_curve(c, n);
}

}  // namespace

TEST_CASE("zero and constant fields integrate exactly") {
    LegendrianODE ode;
    ode.V = [](cplx, cplx, const std::vector<cplx>&) { return cplx(0.0); };
    auto sol = integrate_along_curve(ode, unit_circle(), cplx(0.25, 0.0), {});
    for (const auto& w : sol.w) CHECK(std::abs(w - cplx(0.25, 0.0)) < 1e-12);

    ode.V = [](cplx, cplx, const std::vector<cplx>&) { return cplx(2.0, 1.0); };
    ode.w_radius = 8.0;
    auto lin = integrate_along_curve(ode, segment(0.0, cplx(0.3, 0.1)), 0.0, {});
    CHECK(std::abs(lin.w.back() - cplx(2.0, 1.0) * cplx(0.3, 0.1)) < 1e-11);
    CHECK(std::abs(period(ode, unit_circle(), 0.0, {})) < 1e-11);
}

TEST_CASE("exponential field matches the closed form") {
    LegendrianODE ode;
    ode.V = [](cplx, cplx w, const std::vector<cplx>&) { return w; };
    ode.w_radius = 4.0;
    auto sol = integrate_along_curve(ode, segment(0.0, cplx(1.0, 0.0)), cplx(0.5, 0.0), {});
    CHECK(std::abs(sol.w.back() - 0.5 * std::exp(1.0)) < 1e-9);
    // closed loop: exp(sum dz) = exp(0) = 1, period vanishes
    CHECK(std::abs(period(ode, unit_circle(), cplx(0.5, 0.0), {})) < 1e-9);
}

TEST_CASE("Cauchy kernel field has unit period") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx, const std::vector<cplx>&) {
        return 1.0 / (cplx(0.0, 2 * M_PI) * z);
    };
    double err = 0;
    cplx p = period(ode, unit_circle(), 0.0, {}, 1e-12, &err);
    CHECK(std::abs(p - 1.0) < 1e-10);
    CHECK(err < 1e-8);
}

TEST_CASE("period is parameterization invariant and odd under reversal") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx, const std::vector<cplx>&) {
        return 1.0 / (cplx(0.0, 2 * M_PI) * z) + z * z;
    };
    ode.w_radius = 8.0;
    cplx a = period(ode, unit_circle(128), 0.0, {});
    cplx b = period(ode, unit_circle(517), 0.0, {});
    CHECK(std::abs(a - b) < 1e-10);
    auto rev = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, 1.0).reversed());
    cplx c = period(ode, sample_curve(rev, 256), 0.0, {});
    CHECK(std::abs(a + c) < 1e-10);
}

TEST_CASE("tightening the tolerance tightens the result") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx w, const std::vector<cplx>&) { return std::sin(z) + 0.3 * w; };
    ode.w_radius = 4.0;
    auto curve = segment(0.0, cplx(2.0, 0.5), 16);
    cplx ref = integrate_along_curve(ode, curve, cplx(0.1, 0.0), {}, 1e-13).w.back();
    double e9 = std::abs(integrate_along_curve(ode, curve, cplx(0.1, 0.0), {}, 1e-9).w.back() - ref);
    CHECK(e9 < 1e-8);
    auto s = integrate_along_curve(ode, curve, cplx(0.1, 0.0), {}, 1e-11);
    CHECK(s.accumulated_error < 1e-10);
}

TEST_CASE("escaping solutions halt with the exit location") {
    LegendrianODE ode;
    ode.V = [](cplx, cplx w, const std::vector<cplx>&) { return w * w; };
    ode.w_radius = 50.0;  // w = 1/(1-x) blows up at x = 1
    try {
        (void)integrate_along_curve(ode, segment(0.0, cplx(2.0, 0.0), 32), cplx(1.0, 0.0), {});
        FAIL("expected Escape");
    } catch (const Escape& e) {
        CHECK(e.exit_param > 0.4);
        CHECK(e.exit_param < 0.6);  // |w| = 50 at x = 0.98, param 0.49
    }
}

TEST_CASE("gronwall containment for randomized Lipschitz fields") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto curve = segment(0.0, cplx(1.0, 0.7), 16);
    for (int trial = 0; trial < 20; ++trial) {
        cplx a(u(rng), u(rng)), b(u(rng), u(rng)), q(0.3 * u(rng), 0.3 * u(rng));
        LegendrianODE ode;
        ode.V = [=](cplx z, cplx w, const std::vector<cplx>&) { return a + b * w + q * w * w; };
        ode.w_radius = 8.0;
        std::vector<cplx> zs;
        for (int k = 0; k <= 16; ++k) zs.push_back(curve.source->eval(k / 16.0));
        double c = estimate_lipschitz(ode, zs, {});
        cplx w0(0.1 * u(rng), 0.1 * u(rng));
        cplx w1 = w0 + cplx(0.05 * u(rng), 0.05 * u(rng));
        double len = curve.source->length();
        for (double s : {0.25, 0.5, 0.75, 1.0}) {
            auto part = sample_curve(
                std::make_shared<PiecewiseCurve>(
                    PiecewiseCurve::segment(0.0, cplx(1.0, 0.7) * s)),
                8);
            cplx u0 = integrate_along_curve(ode, part, w0, {}).w.back();
            cplx u1 = integrate_along_curve(ode, part, w1, {}).w.back();
            CHECK(std::abs(u0 - u1) <=
                  gronwall_bound(c, 1.0, std::abs(w0 - w1), s * len) + 1e-12);
        }
    }
}

TEST_CASE("domain integration certifies holomorphy by order agreement") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx, const std::vector<cplx>&) { return z; };
    ode.w_radius = 16.0;
    cplx corner(0.5, -0.25);
    auto grid = integrate_over_domain(ode, corner, 1.0, 0.5, 9, 5, 0.0, {});
    CHECK(grid.order_discrepancy < 1e-9);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            cplx z = corner + cplx(grid.dx * i, grid.dy * j);
            cplx expect = (z * z - corner * corner) / 2.0;
            CHECK(std::abs(grid.w[static_cast<size_t>(j * grid.nx + i)] - expect) < 1e-9);
        }
}

TEST_CASE("non-holomorphic fields are rejected") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx, const std::vector<cplx>&) { return std::conj(z); };
    ode.w_radius = 16.0;
    CHECK_THROWS_AS(
        (void)integrate_over_domain(ode, cplx(0.5, -0.25), 1.0, 0.5, 9, 5, 0.0, {}),
        CommutativityFailure);
}

TEST_CASE("period map runs members in both execution modes identically") {
    LegendrianODE ode;
    ode.V = [](cplx z, cplx w, const std::vector<cplx>& t) {
        cplx s = t.empty() ? cplx(0.0) : t[0] / (cplx(0.0, 2 * M_PI) * z);
        return s + 0.1 * w;
    };
    std::vector<PeriodMember> ms;
    for (double r : {1.0, 1.3, 1.6, 1.9})
        ms.push_back({sample_curve(
                          std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, r)), 256),
                      true, 0.0});
    std::vector<cplx> t = {cplx(0.05, 0.01)};
    auto ps = period_map(ode, ms, t, 1e-11, Exec::Serial);
    auto pp = period_map(ode, ms, t, 1e-11, Exec::Parallel);
    REQUIRE(ps.values.size() == 4);
    for (size_t k = 0; k < 4; ++k) {
        CHECK(ps.values[k] == pp.values[k]);
        CHECK(ps.member_ids[k] == static_cast<int>(k));
    }
}
