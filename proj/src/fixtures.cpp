#include "legtk/fixtures.hpp"

#include <cmath>

namespace legtk {
namespace fixtures {

namespace {

// smooth bulged connector between two points: quadratic bend through an apex
PiecewiseCurve bulge(cplx a, cplx b, cplx apex, int npts = 65) {
    std::vector<cplx> pts(static_cast<size_t>(npts));
    for (int k = 0; k < npts; ++k) {
        double s = static_cast<double>(k) / (npts - 1);
        pts[static_cast<size_t>(k)] =
            (1 - s) * (1 - s) * a + 2 * s * (1 - s) * apex + s * s * b;
    }
    return PiecewiseCurve::from_polyline(pts, false);
}

AdmissibleArc attach(PiecewiseCurve c, int i0, int i1) {
    AdmissibleArc arc;
    arc.curve = std::move(c);
    arc.ends[0] = {true, i0, -1};
    arc.ends[1] = {true, i1, -1};
    return arc;
}

}  // namespace

AdmissibleSet disc() {
    Island isl;
    isl.outer = PiecewiseCurve::circle(0.0, 1.0);
    isl.vertex = 0.0;
    return build_admissible_set({isl}, {});
}

AdmissibleSet annulus() {
    Island isl;
    isl.outer = PiecewiseCurve::circle(0.0, 2.0);
    isl.holes.push_back(PiecewiseCurve::circle(0.0, 0.5, -1));
    isl.vertex = cplx(1.2, 0.0);
    return build_admissible_set({isl}, {});
}

AdmissibleSet pair_of_pants() {
    Island isl;
    isl.outer = PiecewiseCurve::circle(0.0, 3.0);
    isl.holes.push_back(PiecewiseCurve::circle(cplx(-1.4, 0.0), 0.6, -1));
    isl.holes.push_back(PiecewiseCurve::circle(cplx(1.4, 0.0), 0.6, -1));
    isl.vertex = cplx(0.0, 1.8);
    return build_admissible_set({isl}, {});
}

AdmissibleSet two_islands_three_bridges() {
    Island left, right;
    left.outer = PiecewiseCurve::circle(cplx(-2.5, 0.0), 1.0);
    left.vertex = cplx(-2.5, 0.0);
    right.outer = PiecewiseCurve::circle(cplx(2.5, 0.0), 1.0);
    right.vertex = cplx(2.5, 0.0);

    auto on_left = [](double deg) {
        return cplx(-2.5, 0.0) + std::exp(cplx(0.0, deg * M_PI / 180.0));
    };
    auto on_right = [](double deg) {
        return cplx(2.5, 0.0) + std::exp(cplx(0.0, (180.0 - deg) * M_PI / 180.0));
    };
    std::vector<AdmissibleArc> arcs;
    arcs.push_back(attach(PiecewiseCurve::segment(on_left(0), on_right(0)), 0, 1));
    arcs.push_back(attach(bulge(on_left(40), on_right(40), cplx(0.0, 2.2)), 0, 1));
    arcs.push_back(attach(bulge(on_left(-40), on_right(-40), cplx(0.0, -2.2)), 0, 1));
    return build_admissible_set({left, right}, std::move(arcs));
}

AdmissibleSet three_island_chain() {
    std::vector<Island> islands(3);
    const double xs[3] = {-4.0, 0.0, 4.0};
    for (int k = 0; k < 3; ++k) {
        islands[static_cast<size_t>(k)].outer = PiecewiseCurve::circle(cplx(xs[k], 0.0), 1.0);
        islands[static_cast<size_t>(k)].vertex = cplx(xs[k], 0.0);
    }
    auto on = [&](int isl, double deg) {
        return cplx(xs[isl], 0.0) + std::exp(cplx(0.0, deg * M_PI / 180.0));
    };
    std::vector<AdmissibleArc> arcs;
    arcs.push_back(attach(PiecewiseCurve::segment(on(0, 0), on(1, 180)), 0, 1));
    arcs.push_back(attach(PiecewiseCurve::segment(on(1, 0), on(2, 180)), 1, 2));
    // long arc closing a cycle over the middle island
    arcs.push_back(attach(bulge(on(0, 60), on(2, 120), cplx(0.0, 4.0), 97), 0, 2));
    return build_admissible_set(std::move(islands), std::move(arcs));
}

AdmissibleSet free_circle() {
    AdmissibleArc arc;
    arc.curve = PiecewiseCurve::circle(0.0, 1.0);
    arc.ends[0] = {false, -1, -1};
    arc.ends[1] = {false, -1, -1};
    return build_admissible_set({}, {arc});
}

}  // namespace fixtures
}  // namespace legtk
