// Connected Runge homology basis of an admissible set (islands/bridges
// construction) and the interpolation-aware curve family.
#pragma once

#include <vector>

#include "legtk/geometry.hpp"
#include "legtk/raster.hpp"

namespace legtk {

struct HomologyConfig {
    int resolution = 384;      // raster cells across the set bounding box
    int clearance_cells = 5;   // separation between routed curves, in cells
    double eps = 0;            // regular-neighborhood radius; 0 = feature_size / 2
    double snap_tol = 1e-9;    // point-on-curve tolerance for family splits
    Exec exec = Exec::Parallel;
};

struct HomologyBasis {
    std::vector<PiecewiseCurve> cycles;  // oriented, closed, through base_point
    cplx base_point;
    // Per cycle: global-parameter range [lo, hi] of the private arc I_i.
    std::vector<std::pair<double, double>> private_arcs;
    bool runge_certified = false;
    double eps_used = 0;
    int resolution_used = 0;
};

struct BridgeColoring {
    std::vector<int> black;  // spanning arcs: removing any one disconnects
    std::vector<int> red;    // cycle-generating arcs
};

// Partitions Case-3 arcs (endpoints on different islands) into a
// lexicographically-first spanning set (black) and the rest (red).
BridgeColoring classify_bridges(const AdmissibleSet& S);

HomologyBasis build_homology_basis(const AdmissibleSet& S, const HomologyConfig& cfg = {});

// Runge certificate: true iff the rasterized S_eps minus the curves has no
// connected component trapped away from the boundary of S_eps.
bool runge_check(const AdmissibleSet& S, const std::vector<const PiecewiseCurve*>& curves,
                 double eps, int resolution, Exec exec = Exec::Parallel);

struct CurveFamily {
    struct Member {
        PiecewiseCurve curve;
        bool is_cycle = false;  // closed members use periods, arcs terminal values
    };
    std::vector<Member> members;
    std::vector<cplx> interp_points;  // the enlarged finite set A
    cplx base_point;
    bool connected = false;
    bool runge_certified = false;
};

CurveFamily curve_family_with_interpolation(const AdmissibleSet& S, std::vector<cplx> A,
                                            const HomologyConfig& cfg = {});

// Independent rank oracle: 1 - chi(S) from the cell structure.
int euler_rank(const AdmissibleSet& S);

}  // namespace legtk
