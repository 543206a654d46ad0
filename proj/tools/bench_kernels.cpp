// Compares the serial reference implementations of the hot kernels against
// their OpenMP versions: raster fill, period map, boundary certification.
#include <chrono>
#include <iostream>

#include "legtk/fixtures.hpp"
#include "legtk/ode.hpp"
#include "legtk/raster.hpp"
#include "legtk/solver.hpp"

using namespace legtk;
using clk = std::chrono::steady_clock;

namespace {

double ms(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

template <typename F>
double timed(const char* name, Exec exec, F&& f) {
    auto t0 = clk::now();
    f(exec);
    auto t1 = clk::now();
    std::cout << "  " << name << " [" << (exec == Exec::Serial ? "serial " : "parallel")
              << "] " << ms(t0, t1) << " ms\n";
    return ms(t0, t1);
}

}  // namespace

int main() {
    AdmissibleSet annulus = fixtures::annulus();

    std::cout << "raster fill (1536x1536):\n";
    for (Exec e : {Exec::Serial, Exec::Parallel})
        timed("rasterize_region", e,
              [&](Exec x) { rasterize_region(annulus, 0.2, 1536, x); });

    std::cout << "period map (8 members, tol 1e-11):\n";
    auto circle = std::make_shared<PiecewiseCurve>(PiecewiseCurve::circle(0.0, 1.0));
    CurveSamples cs = sample_curve(circle, 512);
    LegendrianODE ode;
    ode.V = [](cplx z, cplx w, const std::vector<cplx>& t) {
        return t[0] / (cplx(0.0, 2 * M_PI) * z) + 0.05 * w * w;
    };
    std::vector<PeriodMember> members(8, PeriodMember{cs, true, 0.0});
    std::vector<cplx> t = {0.05};
    for (Exec e : {Exec::Serial, Exec::Parallel})
        timed("period_map", e, [&](Exec x) { period_map(ode, members, t, 1e-11, x); });

    std::cout << "degree certificate (l = 2, 32/facet):\n";
    PeriodEvaluator P = [&](const std::vector<cplx>& tt) {
        std::vector<cplx> out(tt.size());
        for (size_t k = 0; k < tt.size(); ++k) {
            // synthetic near-identity map with an ODE-solve-like cost
            cplx acc = period(ode, cs, 0.0, {tt[k]}, 1e-9);
            out[k] = tt[k] + 0.05 * acc * acc;
        }
        return out;
    };
    PolydiscSpec spec;
    spec.l = 2;
    spec.delta = 0.05;
    for (Exec e : {Exec::Serial, Exec::Parallel})
        timed("degree_certificate", e, [&](Exec x) { degree_certificate(P, spec, x); });

    return 0;
}
